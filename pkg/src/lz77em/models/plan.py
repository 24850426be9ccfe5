"""Part plan for the disk-budgeted plain-I/O decoder."""


from pydantic import BaseModel, Field


class Part(BaseModel):
    """A contiguous range of the parsing decoded as one unit."""

    phrase_start: int = Field(ge=0, description="Index of the first phrase")
    phrase_end: int = Field(ge=0, description="Index one past the last phrase")
    text_start: int = Field(ge=0, description="Text position of the first phrase")
    text_end: int = Field(ge=0, description="Text position one past the part")
    estimate_bytes: int = Field(default=0, ge=0, description="Estimated peak disk usage")


class PartPlan(BaseModel):
    """Parts tiling the parsing in order, each estimated within the disk budget."""

    parts: list[Part] = Field(default_factory=list)
    disk_budget: int = Field(default=0, ge=0, description="Peak disk bytes; 0 = unlimited")
    input_bytes: int = Field(default=0, ge=0, description="Size of the parsing file")
    n: int = Field(default=0, ge=0, description="Text length")

    @classmethod
    def single(cls, z: int, n: int, input_bytes: int = 0) -> "PartPlan":
        return cls(
            parts=[Part(phrase_start=0, phrase_end=z, text_start=0, text_end=n)],
            input_bytes=input_bytes,
            n=n,
        )

    @property
    def count(self) -> int:
        return len(self.parts)
