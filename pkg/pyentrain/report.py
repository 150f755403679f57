"""Result tables of a run

The result bundle of `pyentrain.pipeline.run_pipeline` is turned into

* the results table, one row per (conversation, feature, measure) cell,
  written as comma-separated and line-delimited JSON files,
* percentage summaries (proximity and convergence per feature,
  conversation-level tests, thirds, gender-stratified shares, the
  code-switching distribution and SNR), written as markdown tables and,
  optionally, as SVG bar charts.

Every number in the summaries is read off the bundle; nothing is
recomputed here besides counting verdicts.
"""
import csv
import json
import os

from dataclasses import dataclass

import numpy as np
from toolz import groupby

from pyentrain import log
from pyentrain.corpus import Gender
from pyentrain.csw import CswStrategy
from pyentrain.measures import Measure, Status, THIRDS
from pyentrain.prosody import FEATURE_LABELS
from pyentrain.series import CSW_LABELS
from pyentrain.stats import Strength, Direction
from pyentrain.utils.plot import bar_summary_svg

RESULT_COLUMNS = ('conversation', 'feature', 'measure', 'statistic', 'p',
                  'n', 'label', 'status', 'detected', 'seed', 'raw_r',
                  'note')
"""Columns of the results table
"""

FORMATS = ('csv', 'jsonl', 'md')

NOT_AVAILABLE = 'N/A'

MEASURE_LABELS = {Measure.TURN_PROX.value: 'Turn-level proximity',
                  Measure.TURN_CONV.value: 'Turn-level convergence',
                  Measure.TURN_SYNC.value: 'Turn-level synchrony',
                  Measure.CONV_PROX.value: 'Conversation-level proximity',
                  Measure.CONV_CONV.value: 'Conversation-level convergence',
                  'lexical': 'Lexical',
                  'perplexity': 'Perplexity'}

BANDS = ((Strength.STRONG, Direction.POSITIVE),
         (Strength.MODERATE, Direction.POSITIVE),
         (Strength.WEAK, Direction.POSITIVE),
         (Strength.WEAK, Direction.NEGATIVE),
         (Strength.MODERATE, Direction.NEGATIVE),
         (Strength.STRONG, Direction.NEGATIVE))


def feature_label(feature, labels=None):
    """Display name of a feature
    """
    for table in (labels or {}, FEATURE_LABELS, CSW_LABELS):
        if feature in table:
            return table[feature]
    return feature


def fmt(value, spec='%.3g'):
    """Format a number for the summaries, N/A for missing values
    """
    if value is None:
        return NOT_AVAILABLE
    value = float(value)
    if np.isnan(value):
        return NOT_AVAILABLE
    if np.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return spec % value


def plain(value):
    """A cell value as JSON-compatible data

    NaN becomes None and infinities the strings 'inf' and '-inf', the
    CSV cells are the text of these values.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value):
            return None
        if np.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if hasattr(value, 'value'):
        return value.value
    return str(value)


def csv_cell(value):
    value = plain(value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def measure_row(result):
    """Results table row of a `MeasureResult`
    """
    return {'conversation': result.conversation_id,
            'feature': result.feature,
            'measure': result.measure.value,
            'statistic': plain(result.statistic),
            'p': plain(result.p),
            'n': result.n,
            'label': str(result.label) if result.label is not None else None,
            'status': result.status.value,
            'detected': bool(result.detected),
            'seed': result.seed,
            'raw_r': plain(result.raw_r),
            'note': result.note}


def lexical_rows(lexical, seed, alpha=0.05):
    """Results table rows of a `LexicalResult`

    The corpus-level paired test comes first, then the verdict of every
    conversation.
    """
    measure = 'perplexity' if lexical.feature.startswith('perplexity') \
        else 'lexical'
    test = lexical.corpus_test
    rows = [{'conversation': '*', 'feature': lexical.feature,
             'measure': measure,
             'statistic': plain(test.statistic) if test else None,
             'p': plain(test.p) if test else None,
             'n': len(lexical.scores), 'label': None,
             'status': (Status.OK if test else Status.NOT_EVALUABLE).value,
             'detected': bool(test is not None and test.p < alpha and
                              test.statistic *
                              (-1 if measure == 'perplexity' else 1) > 0),
             'seed': seed, 'raw_r': None,
             'note': '' if test else 'degenerate pairs'}]
    for conversation_id in sorted(lexical.verdicts):
        verdict = lexical.verdicts[conversation_id]
        entrains = verdict.entrains
        if hasattr(verdict, 'sides_entraining'):
            statistic, p, n = None, None, verdict.n_sides
            note = "%d of %d sides" % (verdict.sides_entraining,
                                       verdict.n_sides)
        else:
            statistic, p, n = (plain(verdict.statistic), plain(verdict.p),
                               verdict.n)
            note = verdict.note
        rows.append({'conversation': conversation_id,
                     'feature': lexical.feature, 'measure': measure,
                     'statistic': statistic, 'p': p, 'n': n, 'label': None,
                     'status': (Status.OK if entrains is not None
                                else Status.NOT_EVALUABLE).value,
                     'detected': bool(entrains), 'seed': seed,
                     'raw_r': None, 'note': note})
    return rows


def result_rows(bundle):
    """All rows of the results table, in a stable order
    """
    rows = [measure_row(result) for result in bundle.results]
    rows.extend(measure_row(pooled.result) for pooled in bundle.pooled)
    for lexical in bundle.lexical:
        rows.extend(lexical_rows(lexical, bundle.seed, bundle.alpha))
    return rows


@dataclass(frozen=True)
class Table(object):
    """A summary table of strings
    """
    title: str
    header: tuple
    rows: tuple


def conversation_genders(corpus):
    """Gender pair of every conversation
    """
    if corpus is None:
        return {}
    return {conversation.id: tuple(speaker.gender
                                   for speaker in conversation.speakers)
            for conversation in corpus}


@dataclass(frozen=True)
class GenderReport(object):
    """Weighted shares of entraining same- and mixed-gender conversations

    The shares are scaled to 50, None marks an empty group.
    """
    measure: str
    feature: str
    same_pct: float
    mixed_pct: float
    same_count: int
    same_total: int
    mixed_count: int
    mixed_total: int
    excluded: int = 0


def gender_weighted_pct(verdicts, genders, measure='', feature=''):
    """Weighted share of entraining conversations per gender group

    `verdicts` maps conversation ids to verdicts (True when entraining),
    `genders` conversation ids to the genders of both speakers.
    Conversations with an unspecified gender are excluded and counted.
    """
    counts = {'same': [0, 0], 'mixed': [0, 0]}
    excluded = 0
    for conversation_id in sorted(genders):
        pair = genders[conversation_id]
        if len(pair) != 2 or Gender.UNSPECIFIED in pair:
            excluded += 1
            continue
        group = 'same' if pair[0] is pair[1] else 'mixed'
        counts[group][1] += 1
        if verdicts.get(conversation_id):
            counts[group][0] += 1
    if excluded:
        log.debug("%d conversations without gender excluded from %s/%s",
                  excluded, measure, feature)

    def weighted(group):
        """Share of a group scaled to 50, None if the group is empty
        """
        count, total = counts[group]
        return None if total == 0 else 50.0 * count / total

    return GenderReport(measure, feature, weighted('same'),
                        weighted('mixed'), counts['same'][0],
                        counts['same'][1], counts['mixed'][0],
                        counts['mixed'][1], excluded)


def _pct_entraining(verdicts, total):
    if not total:
        return None
    return 100.0 * sum(1 for value in verdicts.values() if value) / total


def lexical_table(bundle):
    """Share of entraining conversations and corpus-level test per feature
    """
    total = len(bundle.corpus) if bundle.corpus is not None else 0
    rows = []
    for lexical in bundle.lexical:
        test = lexical.corpus_test
        rows.append((lexical.label,
                     fmt(_pct_entraining({
                         cid: verdict.entrains for cid, verdict
                         in lexical.verdicts.items()}, total), '%.1f'),
                     fmt(test.statistic if test else None),
                     fmt(test.p if test else None)))
    return Table('Lexical entrainment', ('Feature', '%', 't', 'p'),
                 tuple(rows))


def proximity_table(bundle):
    """Pooled turn-level proximity and share of detecting conversations
    """
    rows = tuple((feature_label(pooled.feature),
                  fmt(pooled.pct_conversations, '%.1f'),
                  fmt(pooled.result.statistic),
                  fmt(pooled.result.p))
                 for pooled in bundle.pooled)
    return Table('Turn-level proximity', ('Feature', '%', 't', 'p'), rows)


def distribution_table(bundle, measure):
    """Share of conversations per strength band of a correlation measure

    Only significant results are banded; the last columns hold the
    non-significant and the not evaluable shares.
    """
    by_feature = groupby(
        lambda result: result.feature,
        [result for result in bundle.results
         if result.measure is measure and result.conversation_id != '*' and
         result.status is not Status.SKIPPED])
    rows = []
    for feature, results in by_feature.items():
        counts = dict.fromkeys(BANDS, 0)
        not_significant = 0
        not_evaluable = 0
        for result in results:
            if result.status is not Status.OK:
                not_evaluable += 1
            elif result.p < bundle.alpha and result.label is not None and \
                    (result.label.strength, result.label.direction) in counts:
                counts[(result.label.strength, result.label.direction)] += 1
            else:
                not_significant += 1
        total = float(len(results))
        rows.append((feature_label(feature),) +
                    tuple(fmt(100.0 * counts[band] / total, '%.1f')
                          for band in BANDS) +
                    (fmt(100.0 * not_significant / total, '%.1f'),
                     fmt(100.0 * not_evaluable / total, '%.1f')))
    header = ('Feature',) + tuple(
        "%s %s" % (strength.value.capitalize(),
                   '+' if direction is Direction.POSITIVE else '-')
        for strength, direction in BANDS) + ('n.s.', 'n/a')
    return Table(MEASURE_LABELS[measure.value] + ' by strength', header,
                 tuple(rows))


def conversation_table(bundle):
    """Corpus-level tests of the conversation-level measures
    """
    rows = []
    for result in bundle.results:
        if result.measure not in (Measure.CONV_PROX, Measure.CONV_CONV) or \
           result.status is Status.SKIPPED:
            continue
        verdicts = bundle.verdicts.get((result.measure.value,
                                        result.feature), {})
        rows.append((feature_label(result.feature),
                     MEASURE_LABELS[result.measure.value],
                     fmt(result.statistic), fmt(result.p), str(result.n),
                     fmt(_pct_entraining(verdicts, len(verdicts)), '%.1f')))
    return Table('Conversation-level entrainment',
                 ('Feature', 'Measure', 't', 'p', 'n', '%'), tuple(rows))


def _comparison(result):
    if result is None:
        return NOT_AVAILABLE
    return "%s (%s)" % (fmt(result.statistic), fmt(result.p))


def thirds_table(bundle):
    """Detections per third and tests against the final third
    """
    rows = tuple((feature_label(comparison.feature),
                  MEASURE_LABELS[comparison.measure.value]) +
                 tuple(str(comparison.detected[name]) for name in THIRDS) +
                 (_comparison(comparison.initial_vs_final),
                  _comparison(comparison.middle_vs_final))
                 for comparison in bundle.thirds)
    return Table('Thirds of conversations',
                 ('Feature', 'Measure', 'Initial', 'Middle', 'Final',
                  'Initial vs final', 'Middle vs final'), rows)


def gender_reports(bundle):
    """`GenderReport` of every measure and feature with verdicts
    """
    genders = conversation_genders(bundle.corpus)
    return [gender_weighted_pct(verdicts, genders, measure, feature)
            for (measure, feature), verdicts in bundle.verdicts.items()]


def gender_table(bundle):
    labels = {lexical.feature: lexical.label for lexical in bundle.lexical}
    rows = tuple((feature_label(report.feature, labels),
                  MEASURE_LABELS.get(report.measure, report.measure),
                  fmt(report.same_pct, '%.1f'),
                  fmt(report.mixed_pct, '%.1f'),
                  "%d/%d" % (report.same_count, report.same_total),
                  "%d/%d" % (report.mixed_count, report.mixed_total))
                 for report in gender_reports(bundle))
    return Table('Entrainment by gender (weighted %)',
                 ('Feature', 'Measure', 'Same-gender', 'Mixed-gender',
                  'Same n', 'Mixed n'), rows)


def csw_table(bundle):
    stats = bundle.csw_stats
    rows = ()
    if stats is not None:
        rows = (('Utterances', str(stats.n_utterances)),
                ('Monolingual %', fmt(stats.pct_monolingual, '%.1f'))) + \
            tuple(("%s %%" % strategy.name.capitalize(),
                   fmt(stats.pct_strategy(strategy), '%.1f'))
                  for strategy in CswStrategy)
    return Table('Code-switching', ('Statistic', 'Value'), rows)


def snr_table(bundle):
    snr = bundle.snr
    rows = ()
    if snr is not None:
        rows = (('Recordings', str(snr.n)),
                ('Mean (dB)', fmt(snr.mean, '%.1f')),
                ('Median (dB)', fmt(snr.median, '%.1f')),
                ('Mode (dB)', fmt(snr.mode, '%.1f')),
                ('Above %s dB (%%)' % fmt(snr.threshold, '%g'),
                 fmt(snr.pct_above, '%.1f')),
                ('Reference mean (dB)', fmt(snr.reference, '%.1f')))
    return Table('Signal-to-noise ratio', ('Statistic', 'Value'), rows)


def manifest_table(bundle):
    rows = tuple((entry.stage.value, entry.conversation_id,
                  entry.status.value, entry.message)
                 for entry in bundle.manifest)
    return Table('Failures', ('Stage', 'Conversation', 'Status', 'Message'),
                 rows)


def summary_tables(bundle):
    """All summary tables, in report order
    """
    return [lexical_table(bundle),
            proximity_table(bundle),
            distribution_table(bundle, Measure.TURN_CONV),
            distribution_table(bundle, Measure.TURN_SYNC),
            conversation_table(bundle),
            thirds_table(bundle),
            gender_table(bundle),
            csw_table(bundle),
            snr_table(bundle),
            manifest_table(bundle)]


def markdown_table(table):
    """A table as markdown, a header without rows for empty tables
    """
    def line(cells):
        """One markdown table line
        """
        return "| " + " | ".join(cell.replace('|', '\\|') for cell in cells) \
            + " |"

    lines = ["## " + table.title, "", line(table.header),
             "|" + "|".join("---" for _cell in table.header) + "|"]
    lines.extend(line(row) for row in table.rows)
    return "\n".join(lines) + "\n"


def write_csv(rows, filename):
    with open(filename, 'w', newline='', encoding='utf-8') as outfile:
        writer = csv.writer(outfile, lineterminator='\n')
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([csv_cell(row[column])
                             for column in RESULT_COLUMNS])


def write_jsonl(rows, filename):
    with open(filename, 'w', encoding='utf-8') as outfile:
        for row in rows:
            outfile.write(json.dumps({column: row[column]
                                      for column in RESULT_COLUMNS},
                                     ensure_ascii=False) + "\n")


def write_markdown(tables, filename):
    with open(filename, 'w', encoding='utf-8') as outfile:
        outfile.write("# Entrainment report\n")
        for table in tables:
            outfile.write("\n" + markdown_table(table))


def write_figures(bundle, directory):
    """SVG bar charts of the proximity and gender tables
    """
    filenames = []
    if bundle.pooled:
        filename = os.path.join(directory, 'turn_proximity.svg')
        bar_summary_svg(filename, 'Turn-level proximity',
                        [feature_label(pooled.feature)
                         for pooled in bundle.pooled],
                        {'%': [None if np.isnan(pooled.pct_conversations)
                               else pooled.pct_conversations
                               for pooled in bundle.pooled]})
        filenames.append(filename)
    reports = gender_reports(bundle)
    if reports:
        labels = {lexical.feature: lexical.label
                  for lexical in bundle.lexical}
        filename = os.path.join(directory, 'gender.svg')
        bar_summary_svg(filename, 'Entrainment by gender',
                        ["%s (%s)" % (feature_label(report.feature, labels),
                                      report.measure)
                         for report in reports],
                        {'Same-gender': [report.same_pct
                                         for report in reports],
                         'Mixed-gender': [report.mixed_pct
                                          for report in reports]},
                        ylabel='weighted %')
        filenames.append(filename)
    return filenames


def emit(bundle, formats=FORMATS, output_dir='results', svg=False):
    """Write the results table and summaries, return the file names
    """
    unknown = [fmt_name for fmt_name in formats if fmt_name not in FORMATS]
    if unknown:
        raise ValueError("Unknown output format(s): %s" % ", ".join(unknown))
    try:
        os.makedirs(output_dir, exist_ok=True)
    except OSError as err:
        raise IOError("Cannot create output directory '%s' (%s)"
                      % (output_dir, err))
    rows = result_rows(bundle)
    filenames = []
    if 'csv' in formats:
        filenames.append(os.path.join(output_dir, 'results.csv'))
        write_csv(rows, filenames[-1])
    if 'jsonl' in formats:
        filenames.append(os.path.join(output_dir, 'results.jsonl'))
        write_jsonl(rows, filenames[-1])
    if 'md' in formats:
        filenames.append(os.path.join(output_dir, 'report.md'))
        write_markdown(summary_tables(bundle), filenames[-1])
    if svg:
        filenames.extend(write_figures(bundle, output_dir))
    log.info("Wrote %d result rows to '%s'", len(rows), output_dir)
    return filenames
