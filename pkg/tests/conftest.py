# Keeps this directory on sys.path so tests can import _helpers.
