# -*- coding: utf-8 -*-
"""
Default configuration values for glaplace.

Copy this file to ~/.glaplace/config.py (or to config.py in the working
directory) and edit the values there to override them.
"""

#%% Formal theory:
max_order = 40 # Highest prolongation order before the symbol is declared non-stabilizing
stabilization_guard = 2 # Consecutive constant orders past the staircase bound that declare k_stab
quotient_margin = 1 # Extra orders scanned past k_max when computing the Laplace quotient ideal

#%% Integration pipeline:
max_laplace_steps = 32 # Hard bound on the number of Laplace transformations in one run
max_pure_y_order = 3 # Largest pure Y order searched when classifying an inverse
function_name = 'f' # Name of the arbitrary function in rendered solutions
constant_prefix = 'C' # Prefix of the free constants in rendered solutions

#%% Classical Laplace method:
classic_depth = 10 # Default depth of the invariant sequence on each side

#%% Zoo:
zoo_upto = 10 # Default --upto value of the zoo command
zoo_extrapolation_from = 7 # Smallest complexity whose type list is flagged as extrapolated
zoo_max_cancellations = 3 # Most generator-syzygy pairs of equal degree added to the minimal Betti numbers
oracle_seed = 20061113 # Seed of the deterministic realizability oracle
oracle_trials = 3 # Number of deterministic instances tried per candidate
oracle_coeff_range = 7 # Random integer coefficients are drawn from [-range, range]

#%% Reporting:
verbose = 1 # 0 = warnings only, 1 = progress, 2 = debug
json_indent = 2 # Indentation of JSON reports
