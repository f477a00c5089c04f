# keeps the tests directory on sys.path so sibling helpers (oracles.py) import
