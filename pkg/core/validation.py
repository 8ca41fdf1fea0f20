from .exceptions import SpecError
from .models import Dataset, TestSpec


def validate_spec(spec: TestSpec, data: Dataset) -> None:
    """Check that x, y and cs are in range and pairwise disjoint"""
    ncols = len(data.columns)
    for index in spec.variables:
        if not 0 <= index < ncols:
            raise SpecError(
                f"column index {index} out of range for {ncols} columns",
                index=index,
            )
    seen = set()
    for index in spec.variables:
        if index in seen:
            raise SpecError(
                f"column {data.columns[index].name} (index {index}) is used twice; "
                "x, y and cs must not overlap",
                index=index,
            )
        seen.add(index)
