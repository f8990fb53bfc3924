import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from genfunc.scales.families import FamilyName
from genfunc.storage.json_store import JsonStore, jsonable


@dataclass
class _Report:
    name: str
    values: list[float] = field(default_factory=list)


class TestJsonable:
    def test_non_finite_floats_become_strings(self):
        assert jsonable([math.inf, -math.inf, math.nan, 1.5]) == ["inf", "-inf", "nan", 1.5]

    def test_numpy_and_enums(self):
        data = {"a": np.arange(3), "b": np.float64(2.0), "c": np.bool_(True), 1: FamilyName.R1}
        assert jsonable(data) == {"a": [0, 1, 2], "b": 2.0, "c": True, "1": "R1"}

    def test_dataclass(self):
        assert jsonable(_Report("x", [-math.inf])) == {"name": "x", "values": ["-inf"]}


class TestJsonStore:
    def test_missing_file_reads_empty(self, tmp_path):
        assert JsonStore(tmp_path / "absent.json").read() == {}

    def test_canonical_output(self, tmp_path):
        store = JsonStore(tmp_path / "sub" / "doc.json")
        store.write({"b": 1, "a": {"d": 2, "c": math.inf}})
        text = store.path.read_text(encoding="utf-8")
        assert text == '{\n  "a": {\n    "c": "inf",\n    "d": 2\n  },\n  "b": 1\n}\n'
        assert not list(store.path.parent.glob(".store_*"))

    def test_update(self, tmp_path):
        store = JsonStore(tmp_path / "doc.json")
        store.write({"count": 0})
        with ThreadPoolExecutor(max_workers=4) as pool:
            for _ in range(20):
                pool.submit(store.update, lambda d: {"count": d["count"] + 1})
        assert store.read() == {"count": 20}
