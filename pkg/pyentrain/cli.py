"""Command line interface of pyentrain

Usage: ``pyentrain [options] COMMAND [ARGUMENT ...]``. Commands are
plain functions taking the positional arguments, their docstrings are
their help. Options are read from the configuration file (``-c``) and
overridden with ``-o key value``; shortcuts such as ``--seed`` are
rewritten to overrides before the configuration is validated.

Exit status is 0 on success, 1 when the pipeline failed for every
conversation or an input was invalid, 2 on usage errors.
"""
import argparse
import logging
import os
import sys

from contextlib import contextmanager
from datetime import datetime
from inspect import signature

from pyentrain import conf
from pyentrain import log
from pyentrain.bangor import convert_bangor
from pyentrain.Config import RunConfig
from pyentrain.corpus import parse_corpus, write_corpus, filter_dyadic_csw
from pyentrain.csw import CswStrategy, apply_overrides, corpus_csw_stats, \
    write_csw_dump
from pyentrain.errors import EntrainmentError, PipelineError
from pyentrain.lexicons import load_cues, load_fillers, edge_lexicon
from pyentrain.Logger import console_level
from pyentrain.pipeline import ResultBundle, prosody_from_audio, run_pipeline
from pyentrain.prosody import ProsodyVector, write_feature_dump
from pyentrain.report import emit, summary_tables, FORMATS
from pyentrain.synth import synth_corpus, write_synthetic_corpus, \
    sweep as run_sweep
from pyentrain.utils.printers import print_bold, print_table  # noqa pylint: disable=E0611

DEFAULT_CONFIG_FILENAME = "./pyentrain.ini"
"""Default name for the configuration file
"""

COMMANDS = []
"""List of all commands, filled by main
"""


@contextmanager
def logging_context():
    """Initialize and close the logger based on the configuration
    """
    log_filename = conf['pyentrain.log_filename'] \
        if conf['pyentrain.log_to_file'] else None
    log.initialize(
        console_level=console_level(conf['pyentrain.verbosity']),
        filename=log_filename,
        file_level=logging.getLevelName(conf['pyentrain.log_file_verbosity']),
        no_backups=int(conf['pyentrain.rotate_n_logs']))
    try:
        yield
    finally:
        log.close()


def run_config():
    """The `RunConfig` of the current configuration
    """
    return RunConfig.from_conf(conf)


def load_filtered_corpus(config):
    """Corpus of the configuration with manual labels applied
    """
    config.check_paths()
    corpus = parse_corpus(config.corpus, config.n_processes)
    if config.overrides:
        corpus = apply_overrides(corpus, config.overrides)
    return filter_dyadic_csw(corpus)


def ingest(source, target):
    """Convert a corpus to the interchange format.

    Reads the conversation files at SOURCE (interchange files or, with
    --from bangor, CHAT transcripts) and writes one file per
    conversation to the directory TARGET.
    """
    if conf['ingest.source_format'] == 'bangor':
        filenames = convert_bangor(source, target)
    else:
        filenames = write_corpus(parse_corpus(source), target)
    print("Wrote %d conversations to '%s'" % (len(filenames), target))


def csw(output=None):
    """Extract code-switching features of every utterance.

    Writes the per-utterance table to OUTPUT (default csw.csv in the
    output directory) and prints the strategy distribution.
    """
    config = run_config()
    corpus = load_filtered_corpus(config)
    edge = edge_lexicon(load_cues(config.cues or None),
                        load_fillers(config.fillers or None))
    output = output or os.path.join(config.output_dir, 'csw.csv')
    write_csw_dump(corpus, edge, output)
    stats = corpus_csw_stats(corpus, edge)
    print_table(('Statistic', 'Value'),
                [('Utterances', stats.n_utterances),
                 ('Monolingual %', "%.1f" % stats.pct_monolingual)] +
                [("%s %%" % strategy.name.capitalize(),
                  "%.1f" % stats.pct_strategy(strategy))
                 for strategy in CswStrategy])
    print("Wrote code-switching features to '%s'" % output)


def prosody(output=None):
    """Extract prosodic features from the recordings.

    Writes the feature dump to OUTPUT (default prosody.csv in the output
    directory); the dump can replace the audio in later runs.
    """
    config = run_config()
    corpus = load_filtered_corpus(config)
    bundle = ResultBundle(alpha=config.alpha, seed=config.seed)
    matrices = prosody_from_audio(corpus, config, bundle)
    rows = []
    for conversation in corpus:
        if conversation.id not in matrices:
            continue
        for row, utterance in enumerate(conversation.utterances):
            rows.append((conversation.id, utterance, ProsodyVector.from_array(
                matrices[conversation.id][row])))
    output = output or os.path.join(config.output_dir, 'prosody.csv')
    write_feature_dump(rows, output)
    for entry in bundle.manifest:
        print("%s: %s" % (entry.conversation_id, entry.message))
    if bundle.snr is not None:
        print("Mean SNR %.1f dB over %d recordings (reference %.1f dB)"
              % (bundle.snr.mean, bundle.snr.n, bundle.snr.reference))
    print("Wrote prosodic features of %d conversations to '%s'"
          % (len(matrices), output))


def entrain():
    """Compute all entrainment measures and write the results table.

    Prints the summary tables; writes the csv and jsonl results to the
    output directory.
    """
    config = run_config()
    bundle = run_pipeline(config)
    for table in summary_tables(bundle):
        if table.rows:
            print_bold(table.title)
            print_table(table.header, table.rows)
            print("")
    formats = [name for name in config.formats if name != 'md']
    for filename in emit(bundle, formats, config.output_dir):
        print("Wrote '%s'" % filename)


def report():
    """Run the full pipeline and emit every result file.

    Writes the results table and the summary tables in the configured
    formats (and SVG figures if plot.svg is set) to the output
    directory.
    """
    config = run_config()
    bundle = run_pipeline(config)
    for filename in emit(bundle, config.formats, config.output_dir,
                         config.svg):
        print("Wrote '%s'" % filename)


def synth(target=None):
    """Generate a synthetic corpus with known entrainment.

    Writes transcripts and a prosody feature dump to TARGET (default
    synth in the output directory).
    """
    config = run_config()
    target = target or os.path.join(config.output_dir, 'synth')
    generated = synth_corpus(seed=config.seed)
    corpus, dump = write_synthetic_corpus(generated, target)
    print("Wrote %d conversations to '%s' and features to '%s'"
          % (len(corpus), target, dump))


def sweep(*kinds):
    """Detection rates of the detectors on synthetic data.

    Runs synth.trials conversations per injection kind (proximity,
    convergence, synchrony, csw_proximity; default all) and magnitude.
    """
    config = run_config()
    rows = run_sweep(seed=config.seed, kinds=list(kinds) or None,
                     n_processes=config.n_processes)
    print_table(('Injection', 'Measure', 'Magnitude', 'Trials', 'Rate'),
                [(row.kind, row.measure.value, "%.2f" % row.magnitude,
                  row.trials, "%.2f" % row.rate) for row in rows])


# Redefining help should be ok here
def help(*args):  # pylint:disable=W0622
    """Show help for a command.
    """
    help_dict = dict((command.__name__, command.__doc__)
                     for command in COMMANDS)
    if len(args) == 0:
        print("To get help on a command, use pyentrain help COMMAND")
    elif args[0] in help_dict:
        print(help_dict[args[0]])
    else:
        print("Command '%s' not available." % args[0])


def show_config():
    """Print the configuration.
    """
    for key, value in conf.items():
        print("%s = %s" % (key, value))


def save_config(filename):
    """Save the configuration to a file.
    """
    conf.save(filename)
    print("Wrote configuration to '%s'" % filename)


def show_commands():
    """Print the available commands.
    """
    print_bold("Available commands:")
    for command in COMMANDS:
        print("\t" + command.__name__)


def collect_commands():
    """The analysis commands followed by the default commands
    """
    return [ingest, csw, prosody, entrain, report, synth, sweep,
            help, show_config, save_config, show_commands]


def format_command_help(commands):
    """Format the first sentence of every command's docstring
    """
    return ("available commands:\n\n" +
            "".join("  %-16s" % (command.__name__ + ':') +
                    command.__doc__.replace("\n    ", " ").split(".")[0] +
                    "\n"
                    for command in commands if command.__doc__))


def setup_arg_parser(commands):
    """Setup the argument parser
    """
    arg_parser = argparse.ArgumentParser(
        prog='pyentrain',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Measure entrainment in code-switched dyadic"
                    " conversations.",
        epilog=format_command_help(commands))

    arg_parser.add_argument('command',
                            help='choose a command to run',
                            type=str,
                            choices=[command.__name__
                                     for command in commands])
    arg_parser.add_argument('argument',
                            help='argument to the command',
                            type=str,
                            nargs='*')
    arg_parser.add_argument('-c', '--config',
                            help='specify a configuration file',
                            type=str,
                            default=DEFAULT_CONFIG_FILENAME)
    arg_parser.add_argument('-o', '--option',
                            help='override a configuration option',
                            type=str,
                            nargs=2,
                            metavar=('key', 'value'),
                            action='append')
    arg_parser.add_argument('--seed', type=int,
                            help="seed of all random sampling")
    arg_parser.add_argument('--alpha', type=float,
                            help="significance level of all tests")
    arg_parser.add_argument('--format', type=str, action='append',
                            choices=FORMATS,
                            help="output format (repeatable)")
    arg_parser.add_argument('--from', dest='source_format', type=str,
                            choices=['jsonl', 'bangor'],
                            help="format of the corpus read by ingest")
    arg_parser.add_argument('--verbosity', type=str,
                            choices=['DEBUG', 'INFO', 'WARNING', 'ERROR',
                                     'CRITICAL'],
                            help="choose the console logger's verbosity")
    arg_parser.add_argument('-v', action='store_true',
                            help="shortcut for --verbosity DEBUG")
    arg_parser.add_argument('-j', '--processes', type=int,
                            help="set number of parallel processes used")
    arg_parser.add_argument('--print-timings', action='store_true',
                            help="print logged timings")
    return arg_parser


def handle_shortcuts(args):
    """Rewrite the shortcut flags to configuration overrides
    """
    options = list(args.option or [])
    if args.verbosity is not None:
        options.append(('pyentrain.verbosity', args.verbosity))
    elif args.v:
        options.append(('pyentrain.verbosity', 'DEBUG'))
    if args.processes:
        options.append(('pyentrain.n_processes', str(args.processes)))
    if args.print_timings:
        options.append(('pyentrain.print_timings', 'True'))
    if args.seed is not None:
        options.append(('run.seed', str(args.seed)))
    if args.alpha is not None:
        options.append(('run.alpha', repr(args.alpha)))
    if args.format:
        options.append(('run.formats', list(args.format)))
    if args.source_format is not None:
        options.append(('ingest.source_format', args.source_format))
    args.option = options
    return options


def main(argv=None):
    """Parse the command line and configuration, then run the command

    Returns the exit status.
    """
    global COMMANDS  # pylint:disable=W0603
    COMMANDS = collect_commands()
    arg_parser = setup_arg_parser(COMMANDS)
    args = arg_parser.parse_args(argv)
    handle_shortcuts(args)

    try:
        conf.initialize(args.config, args.option)
    except EntrainmentError as err:
        print("Error: %s" % err, file=sys.stderr)
        return 2

    command = [command for command in COMMANDS
               if command.__name__ == args.command][0]
    try:
        signature(command).bind(*args.argument)
    except TypeError:
        print("Error: wrong arguments for '%s'" % command.__name__,
              file=sys.stderr)
        arg_parser.print_usage()
        return 2

    start_time = datetime.now()
    with logging_context():
        log.debug("Start: '%s'", " ".join(argv or sys.argv))
        try:
            result = command(*args.argument)
        except PipelineError as err:
            log.error("%s", err)
            for entry in err.manifest or []:
                print("%s\t%s\t%s\t%s" % (entry.stage.value,
                                          entry.conversation_id,
                                          entry.status.value, entry.message),
                      file=sys.stderr)
            return 1
        except (EntrainmentError, IOError) as err:
            log.error("%s", err)
            return 1
        if result is not None:
            print(result)
        if conf['pyentrain.print_timings']:
            log.print_timings()
        log.debug("Took: %.3fs",
                  (datetime.now() - start_time).total_seconds())
    return 0


def run():
    """Entry point of the console script
    """
    sys.exit(main())
