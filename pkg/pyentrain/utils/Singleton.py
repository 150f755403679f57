"""Process-wide services for pyentrain.

The configuration and the logger are used from nearly every module of
the package, from the corpus parser down to the DSP extractors. Rather
than threading them through every call, each is held by a class derived
from `Singleton` and accessed through a module-level delegate created by
`delegate_singleton`, i.e., ``from pyentrain import conf, log``.

A `DefaultSingleton` answers with a pseudo instance until it is
explicitly initialized. The configuration uses this to serve the
default values of its specification before a configuration file has
been read, the logger uses it to buffer messages logged before the
command line has chosen a verbosity.
"""
import threading
import inspect


class Singleton(object):
    """Base class for classes that are instantiated once per process
    """
    __singleton_lock = threading.Lock()
    __singleton_instance = None

    @classmethod
    def get_instance(cls):
        """Get the instance, creating it on first access
        """
        if cls.__singleton_instance is None:
            with cls.__singleton_lock:
                if cls.__singleton_instance is None:
                    cls.__singleton_instance = cls()
        return cls.__singleton_instance

    @classmethod
    def reset_instance(cls):
        """Drop the instance, the next access creates a new one
        """
        with cls.__singleton_lock:
            cls.__singleton_instance = None


class DefaultSingleton(Singleton):
    """Singleton that serves a pseudo instance until initialized

    Sub-classes implement `_get_pseudo_instance`.
    """
    __singleton_lock = threading.Lock()
    __singleton_instance = None

    @classmethod
    def _get_pseudo_instance(cls):
        """Get the stand-in used before initialization
        """
        raise NotImplementedError("Subclass should implement this.")

    @classmethod
    def get_instance(cls):
        """Get the initialized instance or the pseudo instance
        """
        if cls.__singleton_instance is None:
            return cls._get_pseudo_instance()
        return cls.__singleton_instance

    @classmethod
    def reset_instance(cls):
        """Forget the initialized instance
        """
        with cls.__singleton_lock:
            cls.__singleton_instance = None

    @classmethod
    def initialize(cls, *args, **kwargs):
        """Create the real instance from the arguments
        """
        instance = cls(*args, **kwargs)
        with cls.__singleton_lock:
            cls.__singleton_instance = instance

    @classmethod
    def is_initialized(cls):
        """True once `initialize` has been called
        """
        return cls.__singleton_instance is not None


_NOT_DELEGATED = frozenset(['__class__', '__init__', '__dict__', '__new__',
                            '__doc__', '__setattr__', '__delattr__',
                            '__getattribute__', '__getattr__', '__dir__',
                            '__abstractmethods__', '__init_subclass__',
                            '__subclasshook__', '__reduce__',
                            '__reduce_ex__', '__weakref__', '__module__',
                            '__slots__', '__qualname__'])


def delegate_singleton(singleton):
    """Create an object passing every access on to the singleton's instance
    """
    def make_delegate(name):
        """Forward the special method `name`
        """
        def forward(_self, *args, **kwargs):
            """Call the special method on the current instance
            """
            return getattr(singleton.get_instance(), name)(*args, **kwargs)
        return forward

    class SingletonDelegate(object):  # pylint: disable=too-few-public-methods
        """Passes attribute access to the singleton's instance
        """
        def __getattr__(self, attr):
            return getattr(singleton.get_instance(), attr)

        def __dir__(self):
            return dir(singleton.get_instance())

        @staticmethod
        def initialize(*args, **kwargs):
            """Initialize the singleton
            """
            singleton.initialize(*args, **kwargs)

        @staticmethod
        def reset_instance():
            """Reset the singleton
            """
            singleton.reset_instance()

    for name, _attr in inspect.getmembers(singleton):
        if not (name.startswith('__') and name.endswith('__')):
            continue
        if name in _NOT_DELEGATED:
            continue
        setattr(SingletonDelegate, name, make_delegate(name))

    return SingletonDelegate()
