"""Configuration of pyentrain runs

The configuration is a `configobj` file validated against the
specification in `Config.DEFAULT_CONFIG_SPECS`. Values are addressed
with dotted keys spanning the sections, e.g., ``conf['run.alpha']`` or
``conf['run.features.prosody']``.

Before `Config.initialize` is called, the ``pyentrain.conf`` delegate
answers with the defaults of the specification, so library code can be
used without any configuration file.

`RunConfig` is the immutable view of the ``[run]`` section used by the
pipeline.
"""
import os

from dataclasses import dataclass

import configobj
import validate

from pyentrain.utils.Singleton import DefaultSingleton
from pyentrain.errors import ConfigError


class Config(DefaultSingleton):
    """Singleton configuration backed by a validated `configobj.ConfigObj`
    """
    DEFAULT_CONFIG_SPECS = """
[pyentrain]
verbosity = option('DEBUG','INFO','WARNING','ERROR','CRITICAL',default='INFO')
log_to_file = boolean(default=False)
log_filename = string(default='pyentrain.log')
log_file_verbosity = option('DEBUG','INFO','WARNING','ERROR','CRITICAL',default='DEBUG')
rotate_n_logs = integer(min=0, default=5)
print_timings = boolean(default=False)
n_processes = integer(min=1, default=1)

[run]
corpus = string(default='')
cues = string(default='')
fillers = string(default='')
overrides = string(default='')
prosody_dump = string(default='')
output_dir = string(default='results')
formats = force_list(default=list('csv', 'jsonl', 'md'))
alpha = float(default=0.05)
seed = integer(min=0, default=0)
other_sample = integer(min=1, default=10)
feature_cache = string(default='')
[[features]]
lexical = boolean(default=True)
perplexity = boolean(default=True)
prosody = boolean(default=True)
csw = boolean(default=True)

[audio]
pitch_floor = float(min=1.0, default=75.0)
pitch_ceiling = float(min=1.0, default=600.0)
time_step = float(min=0.0001, default=0.010)
voicing_threshold = float(min=0.0, max=1.0, default=0.45)
intensity_window = float(min=0.0001, default=0.032)
snr_threshold = float(default=30.0)

[ingest]
source_format = option('jsonl', 'bangor', default='jsonl')

[synth]
turns = integer(min=12, default=60)
conversations = integer(min=2, default=20)
magnitudes = float_list(default=list(0.0, 0.25, 0.5, 0.75, 1.0))
trials = integer(min=1, default=100)

[plot]
svg = boolean(default=True)
font_size = integer(min=4, default=10)
"""
    """Specification of all configuration values and their defaults
    """

    _DEFAULTS = None

    def __init__(self, filename=None, options=None, spec=None):
        """Read `filename` (if it exists), override with the (key, value)
        pairs in `options` and validate against `spec`.
        """
        spec = spec or self.DEFAULT_CONFIG_SPECS
        self.filename = None
        if filename is not None and os.path.isfile(filename):
            self.filename = filename
        self.base = configobj.ConfigObj(self.filename,
                                        configspec=spec.splitlines())
        for key, value in options or []:
            self[key] = value
        self.validate_config(self.base)

    @classmethod
    def _get_pseudo_instance(cls):
        """The default configuration
        """
        if cls._DEFAULTS is None:
            cls._DEFAULTS = cls()
        return cls._DEFAULTS

    @classmethod
    def reset_instance(cls):
        cls._DEFAULTS = None
        super(Config, cls).reset_instance()

    @staticmethod
    def validate_config(config):
        """Validate (and convert) the values of `config`
        """
        result = config.validate(validate.Validator(),
                                 copy=True,
                                 preserve_errors=True)
        if result is not True:
            errors = ["%s: %s" % ('.'.join(sections + [key or '']), error)
                      for sections, key, error
                      in configobj.flatten_errors(config, result)]
            raise ConfigError("Configuration does not adhere to the"
                              " specification: %s" % "; ".join(errors))

    def _section(self, key, create=False):
        """Find the section holding a dotted key
        """
        parts = key.split('.')
        section = self.base
        for part in parts[:-1]:
            if part not in section:
                if not create:
                    raise KeyError(key)
                section[part] = {}
            section = section[part]
            if not isinstance(section, configobj.Section):
                raise KeyError(key)
        return section, parts[-1]

    def __getitem__(self, key):
        section, name = self._section(key)
        return section[name]

    def __setitem__(self, key, value):
        section, name = self._section(key, create=True)
        section[name] = value

    def __contains__(self, key):
        try:
            self[key]
        except KeyError:
            return False
        return True

    def get(self, key, default=None):
        """Get the value at `key`, or `default` if it is not set
        """
        try:
            return self[key]
        except KeyError:
            return default

    def keys(self):
        """All dotted keys, in file order
        """
        def walk(section, prefix):
            """Collect the keys of a section and its subsections
            """
            for name in section.scalars:
                yield prefix + name
            for name in section.sections:
                yield from walk(section[name], prefix + name + '.')
        return list(walk(self.base, ''))

    def items(self):
        """All (dotted key, value) pairs
        """
        return [(key, self[key]) for key in self.keys()]

    def save(self, filename):
        """Write the configuration to `filename`
        """
        with open(filename, 'wb') as outfile:
            self.base.write(outfile)


@dataclass(frozen=True)
class RunConfig(object):
    """Settings of one analysis run
    """
    corpus: str
    cues: str = ''
    fillers: str = ''
    overrides: str = ''
    prosody_dump: str = ''
    output_dir: str = 'results'
    formats: tuple = ('csv', 'jsonl', 'md')
    alpha: float = 0.05
    seed: int = 0
    other_sample: int = 10
    feature_cache: str = ''
    lexical: bool = True
    perplexity: bool = True
    prosody: bool = True
    csw: bool = True
    n_processes: int = 1
    svg: bool = True

    FORMATS = ('csv', 'jsonl', 'md')

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1), got %r" % self.alpha)
        unknown = [fmt for fmt in self.formats if fmt not in self.FORMATS]
        if unknown:
            raise ConfigError("Unknown output format(s): %s"
                              % ", ".join(unknown))

    @classmethod
    def from_conf(cls, config):
        """Build the run settings from a (validated) configuration
        """
        formats = []
        for entry in config['run.formats']:
            formats.extend(fmt.strip() for fmt in entry.split(',')
                           if fmt.strip())
        return cls(corpus=config['run.corpus'],
                   cues=config['run.cues'],
                   fillers=config['run.fillers'],
                   overrides=config['run.overrides'],
                   prosody_dump=config['run.prosody_dump'],
                   output_dir=config['run.output_dir'],
                   formats=tuple(formats),
                   alpha=float(config['run.alpha']),
                   seed=int(config['run.seed']),
                   other_sample=int(config['run.other_sample']),
                   feature_cache=config['run.feature_cache'],
                   lexical=config['run.features.lexical'],
                   perplexity=config['run.features.perplexity'],
                   prosody=config['run.features.prosody'],
                   csw=config['run.features.csw'],
                   n_processes=int(config['pyentrain.n_processes']),
                   svg=config['plot.svg'])

    def check_paths(self):
        """Raise `ConfigError` unless every configured input exists
        """
        if not self.corpus:
            raise ConfigError("No corpus configured (run.corpus)")
        for name in ('corpus', 'cues', 'fillers', 'overrides',
                     'prosody_dump'):
            path = getattr(self, name)
            if path and not os.path.exists(path):
                raise ConfigError("Configured %s '%s' does not exist"
                                  % (name, path))
