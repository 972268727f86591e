"""Enumeration of fixed photon-number Fock bases."""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial, prod
from typing import Dict, Iterator, Sequence, Tuple, Union

from src.config.settings import settings
from src.errors import CapacityError, DimensionError

Occupations = Tuple[int, ...]


@dataclass(frozen=True)
class FockState:
    """Photon count per mode."""

    occupations: Occupations

    def __post_init__(self):
        occupations = tuple(int(n) for n in self.occupations)
        if not occupations:
            raise DimensionError("A Fock state needs at least one mode")
        if any(n < 0 for n in occupations):
            raise DimensionError(f"Negative occupation in {occupations}")
        object.__setattr__(self, "occupations", occupations)

    @property
    def m(self) -> int:
        return len(self.occupations)

    @property
    def k(self) -> int:
        return sum(self.occupations)

    def photon_modes(self) -> Tuple[int, ...]:
        """Mode index of every photon, each mode repeated by its occupation."""
        return tuple(i for i, n in enumerate(self.occupations) for _ in range(n))

    def norm_factor(self) -> int:
        """Product of the factorials of the occupations."""
        return prod(factorial(n) for n in self.occupations)

    def is_collision_free(self) -> bool:
        return all(n <= 1 for n in self.occupations)

    def __str__(self) -> str:
        return "|" + ",".join(str(n) for n in self.occupations) + ">"


def _descending(m: int, k: int) -> Iterator[Occupations]:
    """Occupation vectors of ``k`` photons in ``m`` modes, lexicographically descending."""
    if m == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _descending(m - 1, k - first):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Ordered basis of the ``k``-photon subspace over ``m`` modes."""

    m: int
    k: int
    states: Tuple[FockState, ...]
    index: Dict[Occupations, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def size(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[FockState]:
        return iter(self.states)

    def __getitem__(self, position: int) -> FockState:
        return self.states[position]

    def __contains__(self, state: Union[FockState, Sequence[int]]) -> bool:
        return _key(state) in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.m == other.m and self.k == other.k

    def __hash__(self) -> int:
        return hash((self.m, self.k))

    def index_of(self, state: Union[FockState, Sequence[int]]) -> int:
        """Position of a state in the basis."""
        key = _key(state)
        try:
            return self.index[key]
        except KeyError:
            raise DimensionError(f"{key} is not in the ({self.m}, {self.k}) basis") from None

    def occupation_matrix(self) -> Tuple[Occupations, ...]:
        return tuple(s.occupations for s in self.states)


def _key(state: Union[FockState, Sequence[int]]) -> Occupations:
    if isinstance(state, FockState):
        return state.occupations
    return tuple(int(n) for n in state)


def basis_size(m: int, k: int) -> int:
    """Dimension binomial(m+k-1, k) of the subspace."""
    return comb(m + k - 1, k)


def enumerate_basis(m: int, k: int) -> SubspaceBasis:
    """
    Enumerate every Fock state of ``k`` photons in ``m`` modes.

    Args:
        m: Mode count (>= 1)
        k: Photon count (>= 0)

    Returns:
        The basis in descending lexicographic order with its inverse index

    Raises:
        CapacityError: If the subspace is larger than ``settings.max_basis_states``
    """
    if m < 1 or k < 0:
        raise DimensionError(f"Invalid subspace: m={m}, k={k}")
    size = basis_size(m, k)
    if size > settings.max_basis_states:
        raise CapacityError(
            f"Subspace m={m}, k={k} has {size} states, above the cap of {settings.max_basis_states}"
        )
    return _enumerate(m, k)


@lru_cache(maxsize=128)
def _enumerate(m: int, k: int) -> SubspaceBasis:
    states = tuple(FockState(occ) for occ in _descending(m, k))
    index = {s.occupations: i for i, s in enumerate(states)}
    return SubspaceBasis(m=m, k=k, states=states, index=index)
