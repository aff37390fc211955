'''
This script integrates the example systems of the data/ folder and prints,
for each of them, the route of Laplace transformations and the general
solution. It then lists the class one types up to complexity 6.

@author: glaplace developers
'''

import os

from glaplace.cli import parse_file
from glaplace.laplace1 import Integrator, verify_solution
from glaplace.zoo import enumerate_types
from glaplace.formal import type_label
import glaplace.utilities as utils
from glaplace.utilities import cfg

# Files:
inputs_folder = 'data'
examples = ['example1.pde', 'example2.pde', 'example3.pde']

utils.setup_logging(cfg.verbose)

for name in examples:
    system = parse_file(os.path.join(inputs_folder, name)).system()

    # Reduce and integrate:
    integrator = Integrator(system)
    result = integrator.run()

    print(name)
    for t in result.trace:
        print('  %s (kappa=%d) -> %s (kappa=%d), %s inverse, branch %s'
              % (t.source_type, t.source_kappa, t.target_type, t.target_kappa, t.kind, t.branch))
    print('  u = %s' % result.solution.render())
    print('  verified: %s' % verify_solution(system, result.solution))

# Type zoo:
for n in range(1, 7):
    print('kappa = %d: %s' % (n, ', '.join(type_label(t.orders) for t in enumerate_types(n))))
