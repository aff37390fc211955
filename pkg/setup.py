import pathlib
from setuptools import setup, find_packages

HERE = pathlib.Path(__file__).parent

VERSION = '1.0.0'
PACKAGE_NAME = 'glaplace'
AUTHOR = 'glaplace developers'

LICENSE = 'MIT License'
DESCRIPTION = 'Integrates linear overdetermined PDE systems on the plane by generalized Laplace transformations'
LONG_DESCRIPTION = (HERE / "README.md").read_text()
LONG_DESC_TYPE = "text/markdown"

INSTALL_REQUIRES = [
      'numpy>=1.20',
      'sympy>=1.12',
]

setup(name=PACKAGE_NAME,
      version=VERSION,
      description=DESCRIPTION,
      long_description=LONG_DESCRIPTION,
      long_description_content_type=LONG_DESC_TYPE,
      author=AUTHOR,
      license=LICENSE,
      install_requires=INSTALL_REQUIRES,
      packages=find_packages(include=['glaplace', 'glaplace.*']),
      python_requires='>=3.8',
      setup_requires=['pytest-runner', 'flake8'],
      tests_require=['pytest'],
      entry_points={
            'console_scripts': ['glaplace = glaplace.cli:main']
      }
)
