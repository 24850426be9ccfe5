"""Permuting instance model: items plus a permutation of their indices."""

from pydantic import BaseModel, Field, model_validator


class PermuteInstance(BaseModel):
    """k fixed-width items and a permutation of [0, k)."""

    items: list[bytes] = Field(default_factory=list, description="Items of width h")
    perm: list[int] = Field(default_factory=list, description="Permutation of [0, k)")
    sigma: int = Field(default=256, ge=1, le=256, description="Alphabet bound")

    @model_validator(mode="after")
    def _check_instance(self) -> "PermuteInstance":
        k = len(self.items)
        if len(self.perm) != k or sorted(self.perm) != list(range(k)):
            raise ValueError("perm must be a permutation of [0, k)")
        h = self.h
        for index, item in enumerate(self.items):
            if len(item) != h:
                raise ValueError(f"item {index} has width {len(item)}, expected {h}")
            if item and max(item) >= self.sigma:
                raise ValueError(f"item {index} has a symbol >= sigma={self.sigma}")
        return self

    @property
    def k(self) -> int:
        return len(self.items)

    @property
    def h(self) -> int:
        return len(self.items[0]) if self.items else 0
