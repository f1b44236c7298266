import os

MAX_N = int(os.getenv('FACTPERM_MAX_N', '3'))
# truncation bound for Perm_N(F)
PERM_N = int(os.getenv('FACTPERM_PERM_N', '2'))
# stored Fact_n multiarrows carry at most this many empty sources
MAX_EMPTY = max(2, int(os.getenv('FACTPERM_MAX_EMPTY', '2')))
SEGAL_N = 2
LOG_LEVEL = os.getenv('FACTPERM_LOG_LEVEL', 'WARNING')
FIXTURE_DIR = os.getenv(
    'FACTPERM_FIXTURE_DIR',
    os.path.join(os.path.dirname(__file__), 'fixtures'),
)

OUTPUT_FORMATS = ('text', 'json', 'dot')

# check groups run by `factperm check`; the last five need a permutative fixture
SUITES = ('category', 'finstar', 'fact', 'segal', 'perm', 'roundtrip', 'eta')
