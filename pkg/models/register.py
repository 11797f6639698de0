"""
Register structure for multi-qudit states.

This module defines DimVector (the ordered subsystem dimensions of a
register) and Partition (a bipartition of subsystem indices). Subsystem 0
is the most significant digit of the composite basis index.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

from .errors import PartitionError, StateValidationError


@dataclass(frozen=True)
class DimVector:
    """
    Ordered list of subsystem dimensions.

    Attributes:
        dims (Tuple[int, ...]): Dimension of each subsystem, every entry >= 2
    """
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise StateValidationError("register needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise StateValidationError(f"every subsystem dimension must be >= 2, got {list(dims)}")
        object.__setattr__(self, 'dims', dims)

    @classmethod
    def of(cls, dims) -> 'DimVector':
        """Coerce a DimVector or any integer sequence into a DimVector."""
        if isinstance(dims, DimVector):
            return dims
        return cls(tuple(dims))

    @property
    def total_dim(self) -> int:
        """Product of all subsystem dimensions."""
        return math.prod(self.dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def dim_of(self, indices: Iterable[int]) -> int:
        """Joint dimension of the given subsystems."""
        return math.prod(self.dims[i] for i in indices)

    def subset(self, indices: Sequence[int]) -> 'DimVector':
        """DimVector of the given subsystems, in the order given."""
        return DimVector(tuple(self.dims[i] for i in indices))

    def is_qubit_register(self) -> bool:
        return all(d == 2 for d in self.dims)

    def check_indices(self, indices: Iterable[int], allow_empty: bool = False) -> Tuple[int, ...]:
        """
        Validate an index set against this register.

        Args:
            indices (Iterable[int]): Subsystem indices
            allow_empty (bool): Whether an empty set is acceptable

        Returns:
            Tuple[int, ...]: Sorted, de-duplicated indices

        Raises:
            PartitionError: On empty (when not allowed), duplicate or out-of-range indices
        """
        raw = [int(i) for i in indices]
        if len(set(raw)) != len(raw):
            raise PartitionError(f"duplicate subsystem indices in {raw}")
        if not raw and not allow_empty:
            raise PartitionError("index set must not be empty")
        bad = [i for i in raw if i < 0 or i >= self.n_subsystems]
        if bad:
            raise PartitionError(f"indices {bad} out of range for {self.n_subsystems} subsystems")
        return tuple(sorted(raw))

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, index: int) -> int:
        return self.dims[index]

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


@dataclass(frozen=True)
class Partition:
    """
    Bipartition of register indices into side A and side B.

    Both sides are stored sorted. The union may be a strict subset of the
    register when the partition is applied to a reduced state.

    Attributes:
        side_a (Tuple[int, ...]): Subsystems on side A (transposed by negativity)
        side_b (Tuple[int, ...]): Subsystems on side B
    """
    side_a: Tuple[int, ...]
    side_b: Tuple[int, ...]

    def __post_init__(self):
        side_a = tuple(sorted(int(i) for i in self.side_a))
        side_b = tuple(sorted(int(i) for i in self.side_b))
        if not side_a or not side_b:
            raise PartitionError("both sides of a partition must be non-empty")
        if len(set(side_a)) != len(side_a) or len(set(side_b)) != len(side_b):
            raise PartitionError("duplicate indices inside a partition side")
        if set(side_a) & set(side_b):
            raise PartitionError(f"partition sides overlap: {side_a} / {side_b}")
        if min(side_a + side_b) < 0:
            raise PartitionError("partition indices must be non-negative")
        object.__setattr__(self, 'side_a', side_a)
        object.__setattr__(self, 'side_b', side_b)

    @classmethod
    def parse(cls, text: str) -> 'Partition':
        """
        Parse the `i:jk` syntax (side A digits, colon, side B digits).

        Commas are accepted as separators for registers with more than ten
        subsystems, e.g. `0:1,2,10`.

        Raises:
            PartitionError: If the text is not of that form
        """
        if text.count(':') != 1:
            raise PartitionError(f"partition '{text}' must look like 'i:jk'")
        left, right = text.split(':')

        def _side(part: str) -> Tuple[int, ...]:
            part = part.strip()
            if not part:
                return ()
            tokens = part.split(',') if ',' in part else list(part)
            try:
                return tuple(int(tok) for tok in tokens)
            except ValueError:
                raise PartitionError(f"partition '{text}' contains a non-integer index") from None

        return cls(_side(left), _side(right))

    @classmethod
    def split(cls, n_subsystems: int, first: int) -> 'Partition':
        """Partition `first | everything else` over an n-subsystem register."""
        rest = tuple(i for i in range(n_subsystems) if i != first)
        return cls((first,), rest)

    @property
    def indices(self) -> Tuple[int, ...]:
        """Union of both sides, sorted."""
        return tuple(sorted(self.side_a + self.side_b))

    def covers(self, n_subsystems: int) -> bool:
        return self.indices == tuple(range(n_subsystems))

    def require_cover(self, dims: DimVector) -> None:
        """Raise PartitionError unless the partition covers every subsystem of `dims`."""
        if not self.covers(dims.n_subsystems):
            raise PartitionError(
                f"partition {self} does not cover the {dims.n_subsystems}-subsystem register"
            )

    def require_within(self, dims: DimVector) -> None:
        """Raise PartitionError if any index falls outside the register."""
        if max(self.indices) >= dims.n_subsystems:
            raise PartitionError(f"partition {self} exceeds the {dims.n_subsystems}-subsystem register")

    def localized(self) -> 'Partition':
        """
        Re-index the partition onto the reduced register of its own subsystems.

        Example: `0:2` becomes `0:1` once subsystem 1 has been traced out.
        """
        position = {index: pos for pos, index in enumerate(self.indices)}
        return Partition(tuple(position[i] for i in self.side_a),
                         tuple(position[i] for i in self.side_b))

    def __str__(self) -> str:
        sep = ',' if max(self.indices) > 9 else ''
        return f"{sep.join(map(str, self.side_a))}:{sep.join(map(str, self.side_b))}"
