# -*- coding: utf-8 -*-
"""
Local configuration of glaplace.

Values set here override glaplace/config_defaults.py when glaplace runs from
this folder; keys left out keep their defaults. The same file can be passed
to the command line with -c.
"""

#%% Integration pipeline:
max_laplace_steps = 32 # Hard bound on the number of Laplace transformations in one run
max_pure_y_order = 3 # Largest pure Y order searched when classifying an inverse
function_name = 'f' # Name of the arbitrary function in rendered solutions
constant_prefix = 'C' # Prefix of the free constants in rendered solutions

#%% Classical Laplace method:
classic_depth = 10 # Default depth of the invariant sequence on each side

#%% Zoo:
zoo_upto = 10 # Default --upto value of the zoo command

#%% Reporting:
verbose = 1 # 0 = warnings only, 1 = progress, 2 = debug
