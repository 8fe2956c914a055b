"""Python front end for the kinetic_uq solver suite."""

try:
    from ._kinetic_uq import ConfigError, run, scenario_ids, validate, version
except ImportError:  # extension on sys.path directly, as in the build tree
    from _kinetic_uq import ConfigError, run, scenario_ids, validate, version

__all__ = ["ConfigError", "run", "scenario_ids", "validate", "version"]
