

from setuptools import setup, find_packages


PACKAGE_DATA = {
    'psdiophantine': [
        'data/*.cfg',
    ]
}

INSTALL_REQUIRES = [
    'numpy',
    'scipy',
    'mpmath',
    'boltons',
    'cached-property',
    'tqdm',
    'attrs',
    'ujson',
    'python-box',
    'PyYAML',
]

CLASSIFIERS = [
    'Development Status :: 3 - Alpha',
    'Intended Audience :: Science/Research',
    'License :: OSI Approved :: MIT License',
    'Programming Language :: Python',
    'Programming Language :: Python :: 3.8',
    'Programming Language :: Python :: 3.9',
    'Programming Language :: Python :: 3.10',
    'Topic :: Scientific/Engineering :: Mathematics',
]


setup(
    name='psdiophantine',
    version='0.1.0',
    description='Ternary Diophantine inequalities over Piatetski-Shapiro primes.',
    license='MIT',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    classifiers=CLASSIFIERS,
    install_requires=INSTALL_REQUIRES,
    package_data=PACKAGE_DATA,
    entry_points={
        'console_scripts': ['psd=psdiophantine.cli:main'],
    },
)
