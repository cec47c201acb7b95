import pytest

from magiclattice.lattices import build_lattice, ensure_shell
from magiclattice.states import dedup


class ShellStore:
    """Session-wide memoized access to shells and state sets.

    Everything is enumerated into a throwaway cache directory so the test
    run never depends on (or pollutes) the user's cache.
    """

    def __init__(self, cache_dir):
        self.cache_dir = cache_dir
        self._shells = {}
        self._state_sets = {}

    def shell(self, name, norm):
        key = (name, norm)
        if key not in self._shells:
            lattice = build_lattice(name)
            self._shells[key] = ensure_shell(lattice, norm, cache_dir=self.cache_dir)
        return self._shells[key]

    def states(self, name, norm):
        key = (name, norm)
        if key not in self._state_sets:
            self._state_sets[key] = dedup(self.shell(name, norm))
        return self._state_sets[key]


@pytest.fixture(scope="session")
def store(tmp_path_factory):
    return ShellStore(tmp_path_factory.mktemp("shellcache"))
