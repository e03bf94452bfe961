from setuptools import setup, find_packages
from spinpath import __version__


with open('README.rst') as thefile:
    README = thefile.read()

setup(
    name="spinpath",
    version=__version__,
    packages=find_packages(exclude=['tests']),
    description="Spin-path entangled neutron CHSH tests with a tunable geometric phase",
    long_description=README,

    install_requires=[
        'numpy >= 1.17',
        'scipy',
        'six',
    ],
    tests_require=[
        'pytest',
    ],
    entry_points={
        'console_scripts': ['spinpath = spinpath.cli:main'],
    },

    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
