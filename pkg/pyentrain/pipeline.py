"""The analysis pipeline from a corpus to a result bundle

Stages run in order: ingest, code-switching features, prosody (from a
feature dump, the feature cache or the recordings), turn series, the
entrainment measures and lexical entrainment. A failing conversation
does not stop the run; it is recorded in the failure manifest of the
bundle. Stages without input (e.g., prosody of a corpus without audio)
are SKIPPED.
"""
import enum

from dataclasses import dataclass, field

from pyentrain import conf
from pyentrain import log
from pyentrain.audio import read_audio, estimate_snr, snr_summary
from pyentrain.corpus import parse_corpus, filter_dyadic_csw
from pyentrain.csw import apply_overrides, conversation_csw, corpus_csw_stats
from pyentrain.errors import EntrainmentError, PipelineError
from pyentrain.FeatureStore import FeatureStore, audio_fingerprint
from pyentrain.lexical import (build_word_classes, word_class_entrainment,
                               perplexity_entrainment)
from pyentrain.lexicons import (load_cues, load_fillers, edge_lexicon,
                                TokenNormalizer)
from pyentrain.measures import (Measure, MeasureResult, Status,
                                TURN_MEASURES, turn_measures, thirds_analysis,
                                compare_thirds, pooled_turn_proximity,
                                conv_proximity, conv_convergence)
from pyentrain.parallel import parallel_map
from pyentrain.prosody import (PROSODY_FIELDS, audio_parameters,
                               conversation_prosody, normalize_corpus_prosody,
                               read_feature_dump, dump_matrix)
from pyentrain.series import CSW_FEATURES, csw_series, prosody_series, \
    side_means


class Stage(enum.Enum):
    INGEST = 'ingest'
    CSW = 'csw'
    PROSODY = 'prosody'
    LEXICAL = 'lexical'
    PERPLEXITY = 'perplexity'
    MEASURES = 'measures'


@dataclass(frozen=True)
class ManifestEntry(object):
    """A conversation (or '*' for the corpus) a stage did not process
    """
    stage: Stage
    conversation_id: str
    status: Status
    message: str


@dataclass
class ResultBundle(object):
    """Everything a run computes, the input of `pyentrain.report.emit`

    `verdicts` maps (measure name, feature) pairs to dicts from conversation
    ids to the per-conversation verdict (None where not evaluable).
    """
    alpha: float = 0.05
    seed: int = 0
    corpus: object = None
    results: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    lexical: list = field(default_factory=list)
    pooled: list = field(default_factory=list)
    thirds: list = field(default_factory=list)
    csw_stats: object = None
    snr: object = None
    manifest: list = field(default_factory=list)
    stages: dict = field(default_factory=dict)

    def add_failure(self, stage, conversation_id, status, message):
        log.warning("%s of '%s' %s: %s", stage.value, conversation_id,
                    status.value, message)
        self.manifest.append(ManifestEntry(stage, conversation_id, status,
                                           message))


def load_corpus(config, bundle):
    """Parse, apply manual labels and keep the code-switched dyads
    """
    corpus = parse_corpus(config.corpus, config.n_processes)
    for diagnostic in corpus.diagnostics:
        bundle.add_failure(Stage.INGEST, '*', Status.FAILED, diagnostic)
    if config.overrides:
        corpus = apply_overrides(corpus, config.overrides)
    return filter_dyadic_csw(corpus)


def extract_cell(cell):
    """Prosody matrix and per-channel SNR of one conversation

    Returns (conversation id, matrix or None, SNR values, error message).
    """
    conversation, parameters, extract = cell
    matrix = None
    snr = []
    try:
        channels = sorted(set(conversation.audio.channel(speaker_id)
                              for speaker_id in conversation.speaker_ids))
        for channel in channels:
            try:
                snr.append(estimate_snr(read_audio(conversation.audio.path,
                                                   channel)))
            except EntrainmentError as err:
                log.info("No SNR for '%s' channel %d: %s", conversation.id,
                         channel, err)
        if extract:
            matrix = conversation_prosody(conversation, parameters)
    except (EntrainmentError, IOError, OSError) as err:
        return conversation.id, None, snr, str(err)
    return conversation.id, matrix, snr, None


def prosody_from_audio(corpus, config, bundle):
    """Raw prosody matrices of the conversations with recordings
    """
    parameters = audio_parameters()
    with_audio = [conversation for conversation in corpus
                  if conversation.audio is not None]
    cached = {}
    fingerprints = {}
    store = FeatureStore(config.feature_cache) if config.feature_cache \
        else None
    if store is not None:
        with store:
            for conversation in with_audio:
                try:
                    fingerprint = audio_fingerprint(conversation.audio.path,
                                                    parameters)
                except OSError as err:
                    log.debug("No fingerprint of '%s': %s",
                              conversation.id, err)
                    continue
                fingerprints[conversation.id] = fingerprint
                matrix = store.load(conversation.id, fingerprint)
                if matrix is not None:
                    cached[conversation.id] = matrix

    with log.timed("prosody extraction"):
        extracted = parallel_map(
            extract_cell,
            [(conversation, parameters, conversation.id not in cached)
             for conversation in with_audio],
            config.n_processes)

    matrices = {}
    snr = []
    for conversation_id, matrix, values, error in extracted:
        snr.extend(values)
        if error is not None:
            bundle.add_failure(Stage.PROSODY, conversation_id, Status.FAILED,
                               error)
            continue
        if matrix is None:
            matrix = cached[conversation_id]
        elif store is not None and conversation_id in fingerprints:
            with store:
                store.save(conversation_id, fingerprints[conversation_id],
                           matrix)
        matrices[conversation_id] = matrix
    if snr:
        bundle.snr = snr_summary(snr, float(conf['audio.snr_threshold']))
    return matrices


def raw_prosody(corpus, config, bundle):
    """Raw prosody matrices from the feature dump or the recordings
    """
    if config.prosody_dump:
        dump = read_feature_dump(config.prosody_dump)
        return {conversation.id: dump_matrix(conversation, dump)
                for conversation in corpus if conversation.id in dump}
    return prosody_from_audio(corpus, config, bundle)


def skipped_results(feature, conversation_ids, note):
    """SKIPPED results of every measure of a feature
    """
    results = [MeasureResult(measure, conversation_id, feature,
                             status=Status.SKIPPED, note=note)
               for measure in TURN_MEASURES
               for conversation_id in conversation_ids]
    results.extend(MeasureResult(measure, '*', feature,
                                 status=Status.SKIPPED, note=note)
                   for measure in (Measure.CONV_PROX, Measure.CONV_CONV))
    return results


def measure_cell(cell):
    """Turn-level measures and thirds analysis of one series
    """
    series, other_sample, seed, alpha = cell
    return (turn_measures(series, other_sample, seed, alpha),
            thirds_analysis(series, other_sample, seed, alpha))


def run_measures(feature, series_list, config, bundle):
    """All entrainment measures of one feature over the corpus
    """
    cells = parallel_map(measure_cell,
                         [(series, config.other_sample, config.seed,
                           config.alpha) for series in series_list],
                         config.n_processes)
    thirds = {}
    proximity = []
    for series, (results, series_thirds) in zip(series_list, cells):
        bundle.results.extend(results)
        thirds[series.conversation_id] = series_thirds
        proximity.append(results[0])
        for result in results:
            verdicts = bundle.verdicts.setdefault(
                (result.measure.value, feature), {})
            verdicts[series.conversation_id] = \
                result.detected if result.status is Status.OK else None

    bundle.pooled.append(pooled_turn_proximity(
        series_list, proximity, feature, config.other_sample, config.seed,
        config.alpha))
    for measure in TURN_MEASURES:
        bundle.thirds.append(compare_thirds(thirds, measure, feature))
    for corpus_measure in (conv_proximity(side_means(series_list), feature,
                                          config.alpha),
                           conv_convergence(series_list, feature,
                                            config.alpha)):
        bundle.results.append(corpus_measure.result)
        bundle.verdicts[(corpus_measure.result.measure.value, feature)] = \
            dict(corpus_measure.verdicts)


def csw_stage(corpus, edge, config, bundle):
    """Code-switching series of every conversation
    """
    if not config.csw:
        bundle.stages[Stage.CSW] = Status.SKIPPED
        return {}
    series = {}
    for conversation in corpus:
        try:
            series[conversation.id] = csw_series(
                conversation, conversation_csw(conversation, edge))
        except (EntrainmentError, ValueError) as err:
            bundle.add_failure(Stage.CSW, conversation.id, Status.FAILED,
                               str(err))
    try:
        bundle.csw_stats = corpus_csw_stats(corpus, edge)
    except EntrainmentError as err:
        log.warning("No code-switching statistics: %s", err)
    bundle.stages[Stage.CSW] = Status.OK
    return series


def prosody_stage(corpus, config, bundle):
    """Normalized prosody series of every conversation with features
    """
    if not config.prosody:
        bundle.stages[Stage.PROSODY] = Status.SKIPPED
        return {}
    with log.timed("prosody"):
        matrices = raw_prosody(corpus, config, bundle)
    for conversation in corpus:
        if conversation.id not in matrices and not any(
                entry.conversation_id == conversation.id and
                entry.stage is Stage.PROSODY for entry in bundle.manifest):
            bundle.add_failure(Stage.PROSODY, conversation.id,
                               Status.SKIPPED, "no audio or feature dump")
    if not matrices:
        bundle.stages[Stage.PROSODY] = Status.SKIPPED
        return {}
    normalized = normalize_corpus_prosody(
        {conversation.id: (conversation, matrices[conversation.id])
         for conversation in corpus if conversation.id in matrices})
    bundle.stages[Stage.PROSODY] = Status.OK
    return {conversation.id: prosody_series(conversation,
                                            normalized[conversation.id])
            for conversation in corpus if conversation.id in normalized}


def lexical_stage(corpus, cues, fillers, config, bundle):
    """Word class and perplexity entrainment
    """
    normalizer = TokenNormalizer(cues, fillers)
    stages = ((Stage.LEXICAL, config.lexical,
               lambda: word_class_entrainment(
                   corpus, build_word_classes(corpus, cues, fillers,
                                              normalizer),
                   normalizer, config.alpha)),
              (Stage.PERPLEXITY, config.perplexity,
               lambda: [perplexity_entrainment(corpus, normalizer, True),
                        perplexity_entrainment(corpus, normalizer, False)]))
    for stage, enabled, compute in stages:
        if not enabled:
            bundle.stages[stage] = Status.SKIPPED
            continue
        try:
            with log.timed(stage.value):
                results = compute()
        except EntrainmentError as err:
            bundle.add_failure(stage, '*', Status.FAILED, str(err))
            bundle.stages[stage] = Status.FAILED
            continue
        for result in results:
            bundle.lexical.append(result)
            bundle.verdicts[(stage.value, result.feature)] = {
                conversation_id: verdict.entrains
                for conversation_id, verdict in result.verdicts.items()}
        bundle.stages[stage] = Status.OK


def run_pipeline(config):
    """Run every enabled stage on the corpus of a `RunConfig`

    Raises `PipelineError` (with the manifest) when no conversation
    could be analyzed.
    """
    config.check_paths()
    bundle = ResultBundle(alpha=config.alpha, seed=config.seed)
    with log.timed("ingest"):
        corpus = load_corpus(config, bundle)
    bundle.corpus = corpus
    bundle.stages[Stage.INGEST] = Status.OK
    if len(corpus) == 0:
        raise PipelineError("No dyadic code-switched conversations in '%s'"
                            % config.corpus, bundle.manifest)

    cues = load_cues(config.cues or None)
    fillers = load_fillers(config.fillers or None)
    edge = edge_lexicon(cues, fillers)

    with log.timed("csw"):
        csw = csw_stage(corpus, edge, config, bundle)
    prosody = prosody_stage(corpus, config, bundle)

    analyzed = set(csw) | set(prosody)
    if not analyzed:
        raise PipelineError("All %d conversations failed" % len(corpus),
                            bundle.manifest)

    with log.timed("measures"):
        if config.csw:
            for feature in CSW_FEATURES:
                run_measures(feature, [csw[conversation.id][feature]
                                       for conversation in corpus
                                       if conversation.id in csw],
                             config, bundle)
        if config.prosody:
            missing = [conversation.id for conversation in corpus
                       if conversation.id not in prosody]
            for feature in PROSODY_FIELDS:
                if not prosody:
                    bundle.results.extend(skipped_results(
                        feature, [conversation.id for conversation in corpus],
                        "no audio or feature dump"))
                    continue
                run_measures(feature, [prosody[conversation.id][feature]
                                       for conversation in corpus
                                       if conversation.id in prosody],
                             config, bundle)
                bundle.results.extend(
                    MeasureResult(measure, conversation_id, feature,
                                  status=Status.SKIPPED,
                                  note="no audio or feature dump")
                    for measure in TURN_MEASURES
                    for conversation_id in missing)
    bundle.stages[Stage.MEASURES] = Status.OK

    lexical_stage(corpus, cues, fillers, config, bundle)

    n_failed = len(set(entry.conversation_id for entry in bundle.manifest
                       if entry.status is Status.FAILED and
                       entry.conversation_id != '*'))
    log.info("Analyzed %d conversations, %d with failures", len(corpus),
             n_failed)
    return bundle
