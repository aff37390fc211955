'''
Configuration loading and logging helpers shared by all glaplace modules.

The configuration is a plain python module. A customized config.py can be
stored in a '.glaplace' folder of your home directory; otherwise a config.py
in the current working directory is used, and the packaged defaults if neither
exists.
'''
import os
import time
import logging
import importlib.util

from glaplace import config_defaults

#%% Importing the config.py file

def import_module_by_path(path):
    '''
    Load a glaplace config file as a module without putting its folder on
    sys.path.

    Parameters
    ----------
    path : str
        A config.py overriding some of the names in config_defaults.

    Returns
    -------
    module
        The executed config. Keys it lacks are filled in by gen_cfg and
        apply_config, not here.

    '''
    name = os.path.splitext(os.path.basename(path))[0]
    spec = importlib.util.spec_from_file_location(name, path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)

    return mod


def _with_defaults(mod):
    # Values missing from a user config fall back to the packaged defaults:
    for key, value in vars(config_defaults).items():
        if not key.startswith('_') and not hasattr(mod, key):
            setattr(mod, key, value)
    return mod


def gen_cfg(config_file=None):
    '''
    Load a configuration module.

    Parameters
    ----------
    config_file : str or None, optional
        Path to a config.py file. If None, the home directory config is used,
        then a local config.py, then the packaged defaults.
        The default is None.

    Returns
    -------
    cfg : module
        Configuration module with every default key present.

    '''
    if config_file is not None:
        return _with_defaults(import_module_by_path(config_file))
    hd_path = os.path.expanduser('~/.glaplace/config.py')
    if os.path.exists(hd_path):
        return _with_defaults(import_module_by_path(hd_path))
    if os.path.exists('config.py'):
        return _with_defaults(import_module_by_path('config.py'))
    return config_defaults


cfg = gen_cfg()


def apply_config(config_file):
    '''
    Load a config file into the active cfg module, so that every module
    importing cfg sees the new values.
    '''
    custom = _with_defaults(import_module_by_path(config_file))
    for key, value in vars(custom).items():
        if not key.startswith('_'):
            setattr(cfg, key, value)
    return cfg

#%% Logging

_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


def setup_logging(verbose=None):
    '''
    Configure the root logger for command-line use.

    Parameters
    ----------
    verbose : int or None, optional
        0 = warnings only, 1 = progress, 2 = debug. If None, cfg.verbose is
        used. The default is None.

    Returns
    -------
    None.

    '''
    if verbose is None:
        verbose = cfg.verbose
    level = _LEVELS.get(min(max(int(verbose), 0), 2))
    logging.basicConfig(
        level=level, format='%(levelname)s %(name)s: %(message)s'
        )
    logging.getLogger('glaplace').setLevel(level)


class Verbose:
    '''
    Mixin giving long-running objects a verbose flag and a timestamped _msg
    '''
    verbose = 1
    logger = logging.getLogger('glaplace')

    def _msg(self, string, level=1):
        if self.verbose >= level:
            self.logger.info('%s - %s', time.ctime(), string)
        else:
            self.logger.debug(string)
