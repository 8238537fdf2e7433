from setuptools import setup, find_packages

try:
    long_description = open('README.rst').read()
except IOError:
    long_description = ''

setup(
    name = "gradedq",
    version = '0.1.0',
    description = 'Verification kernel for graded NQ-manifolds, with a small checking language',
    packages = find_packages(),
    include_package_data = True,
    package_data = {'gradedq.language': ['report.schema.json']},
    long_description = long_description,
    install_requires = ['sympy', 'numpy', 'scipy'],
    tests_require = ['pytest', 'jsonschema'],
    extras_require = {'test': ['pytest', 'jsonschema']},
    entry_points = {
        'console_scripts': ['gq = gradedq.cli:main'],
    },
)
