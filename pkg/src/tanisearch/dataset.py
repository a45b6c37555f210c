"""Dataset model and CSV ingestion.

A dataset is an m x n real matrix with one row per molecule, plus a molecule
id, an optional drug-class label, and attribute names. The expected CSV
schema is: header row with first cell "id", second cell "class" when labels
are present, remaining cells naming the attributes; one molecule per row.
"""

from __future__ import annotations

import csv
import io
import math
import os
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import MoleculeNotFoundError, ParseError, ValidationError


class DrugClass(Enum):
    ATS = "ATS"
    NATS = "NATS"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class IngestOptions:
    """CSV ingestion switches.

    has_class_column: True/False to force the second column's meaning,
    None to autodetect from the header (second cell literally "class").
    """

    has_class_column: bool | None = None


@dataclass(eq=False)
class MoleculeRecord:
    """One molecule: id, drug-class label, and its descriptor vector."""

    id: str
    drug_class: DrugClass
    features: np.ndarray


@dataclass(eq=False)
class DescriptorMatrix:
    """Immutable, validated database of molecule records.

    `values` is the m x n float64 matrix in file row order; `ids` and
    `drug_classes` run parallel to its rows. Safe to share across threads.
    """

    ids: list[str]
    drug_classes: list[DrugClass]
    attribute_names: list[str]
    values: np.ndarray
    has_class_column: bool = True
    _row_of: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError("values must be a 2-D matrix")
        m, n = values.shape
        if m < 1:
            raise ValidationError("dataset must contain at least one record")
        if n < 1:
            raise ValidationError("dataset must contain at least one feature column")
        if len(self.ids) != m or len(self.drug_classes) != m:
            raise ValidationError("ids/classes length does not match the row count")
        if len(self.attribute_names) != n:
            raise ValidationError("attribute_names length does not match the column count")
        if not np.isfinite(values).all():
            raise ValidationError("feature values must all be finite")
        row_of: dict[str, int] = {}
        for i, mol_id in enumerate(self.ids):
            if not mol_id:
                raise ValidationError(f"empty molecule id at row {i + 1}")
            if mol_id in row_of:
                raise ValidationError(f"duplicate molecule id '{mol_id}'")
            row_of[mol_id] = i
        values.setflags(write=False)
        self.values = values
        self._row_of = row_of

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def records(self) -> list[MoleculeRecord]:
        return [
            MoleculeRecord(mol_id, cls, self.values[i])
            for i, (mol_id, cls) in enumerate(zip(self.ids, self.drug_classes))
        ]

    def row_index(self, molecule_id: str) -> int:
        try:
            return self._row_of[molecule_id]
        except KeyError:
            raise MoleculeNotFoundError(
                f"no molecule with id '{molecule_id}' in the dataset"
            ) from None


def _read_text(source) -> str:
    """Accept a path, a binary stream, or a text stream; return decoded text."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8-sig")
    return data.lstrip("\ufeff")


def _parse_drug_class(label: str, line: int) -> DrugClass:
    token = label.strip().upper()
    if token == "ATS":
        return DrugClass.ATS
    if token == "NATS":
        return DrugClass.NATS
    if token != "UNKNOWN":
        warnings.warn(
            f"unrecognized drug class label '{label}' on line {line}; treated as UNKNOWN",
            stacklevel=3,
        )
    return DrugClass.UNKNOWN


def load_dataset(source, options: IngestOptions | None = None) -> DescriptorMatrix:
    """Load a descriptor CSV (path or byte/text stream) into a DescriptorMatrix.

    Row order of the file is preserved. Raises ParseError for malformed cells
    or ragged rows (with line numbers) and ValidationError for invariant
    violations such as duplicate ids or an empty feature set.
    """
    opts = options or IngestOptions()
    reader = csv.reader(io.StringIO(_read_text(source)))

    header = None
    for row in reader:
        if row:
            header = row
            break
    if header is None:
        raise ParseError("empty input: no header row found", line=1)

    if header[0].strip() != "id":
        raise ParseError(
            f"first header cell must be 'id', found '{header[0]}'", line=reader.line_num
        )
    if opts.has_class_column is None:
        has_class = len(header) >= 2 and header[1].strip() == "class"
    else:
        has_class = opts.has_class_column
    first_feature = 2 if has_class else 1
    attribute_names = [name.strip() for name in header[first_feature:]]
    if not attribute_names:
        raise ValidationError("dataset has no feature columns")

    ids: list[str] = []
    classes: list[DrugClass] = []
    feature_rows: list[list[float]] = []
    expected = len(header)
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != expected:
            raise ParseError(
                f"ragged row on line {line}: expected {expected} fields, found {len(row)}",
                line=line,
                row=len(ids) + 1,
            )
        mol_id = row[0].strip()
        if not mol_id:
            raise ValidationError(f"empty molecule id on line {line}")
        cls = _parse_drug_class(row[1], line) if has_class else DrugClass.UNKNOWN
        features = []
        for j, cell in enumerate(row[first_feature:]):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"row {len(ids) + 1} (line {line}), column '{attribute_names[j]}': "
                    f"not a number: '{cell}'",
                    line=line,
                    row=len(ids) + 1,
                    column=attribute_names[j],
                ) from None
            if not math.isfinite(value):
                raise ParseError(
                    f"row {len(ids) + 1} (line {line}), column '{attribute_names[j]}': "
                    f"non-finite value '{cell}'",
                    line=line,
                    row=len(ids) + 1,
                    column=attribute_names[j],
                )
            features.append(value)
        ids.append(mol_id)
        classes.append(cls)
        feature_rows.append(features)

    if not feature_rows:
        raise ValidationError("dataset contains no records")
    values = np.array(feature_rows, dtype=np.float64)
    return DescriptorMatrix(ids, classes, attribute_names, values, has_class_column=has_class)


def save_dataset(matrix: DescriptorMatrix, dest) -> None:
    """Write a matrix back to CSV so that load_dataset round-trips it exactly."""
    own = isinstance(dest, (str, os.PathLike))
    fh = open(dest, "w", encoding="utf-8", newline="") if own else dest
    try:
        writer = csv.writer(fh, lineterminator="\n")
        if matrix.has_class_column:
            writer.writerow(["id", "class", *matrix.attribute_names])
        else:
            writer.writerow(["id", *matrix.attribute_names])
        for i, mol_id in enumerate(matrix.ids):
            cells = [repr(float(v)) for v in matrix.values[i]]
            if matrix.has_class_column:
                writer.writerow([mol_id, matrix.drug_classes[i].value, *cells])
            else:
                writer.writerow([mol_id, *cells])
    finally:
        if own:
            fh.close()


def get_reference(matrix: DescriptorMatrix, molecule_id: str) -> MoleculeRecord:
    """Select one record by exact id; MoleculeNotFoundError if absent."""
    i = matrix.row_index(molecule_id)
    return MoleculeRecord(matrix.ids[i], matrix.drug_classes[i], matrix.values[i])


def append_records(base: DescriptorMatrix, extra: DescriptorMatrix) -> DescriptorMatrix:
    """Concatenate two datasets with identical attribute columns.

    Used to add an external reference row to the database before statistics
    are computed. Duplicate ids across the two inputs are rejected.
    """
    if extra.attribute_names != base.attribute_names:
        raise ValidationError(
            "cannot append records: attribute names differ from the base dataset"
        )
    for mol_id in extra.ids:
        if mol_id in base._row_of:
            raise ValidationError(f"duplicate molecule id '{mol_id}'")
    return DescriptorMatrix(
        base.ids + extra.ids,
        base.drug_classes + extra.drug_classes,
        list(base.attribute_names),
        np.vstack([base.values, extra.values]),
        has_class_column=base.has_class_column or extra.has_class_column,
    )
