

import os
import logging
import sys
import tempfile


__version__ = '0.1.0'

PSD_ENV = os.environ.get('PSD_ENV')

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')

DEMO_CONFIG_PATH = os.path.join(DATA_DIR, 'demo-sqrt2.cfg')

CACHE_DIR = os.environ.get(
    'PSD_CACHE_DIR',
    os.path.join(os.path.expanduser('~'), '.cache', 'psdiophantine'),
)

# Throwaway caches for tests.
if PSD_ENV == 'test':
    CACHE_DIR = os.path.join(tempfile.gettempdir(), 'psdiophantine-test')


logging.basicConfig(
    format='%(asctime)s | %(levelname)s : %(message)s',
    stream=sys.stdout,
    level=logging.INFO,
)

logger = logging.getLogger('psdiophantine')
