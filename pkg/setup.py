import os
from setuptools import setup, find_packages
from codecs import open  # For consistent encoding

here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

with open(os.path.join(here, 'requirements.txt'), encoding='utf-8') as f:
    requirements = f.read().splitlines()

packages = find_packages(exclude=['tornPaper.testenv'])

setup(
    name='tornPaper',
    version='0.1.0',
    description='Torn paper channel capacity, bounds and simulations',
    long_description=long_description,
    long_description_content_type='text/markdown',
    license='Modified Apache 2.0 License',
    packages=packages,
    python_requires='>=3.7',
    install_requires=requirements,
    tests_require=['scipy>=1.5'],
    extras_require={'test': ['scipy>=1.5']},
    entry_points={
        'console_scripts': [
            'tornpaper=tornPaper.cli:main',
        ],
    },
)
