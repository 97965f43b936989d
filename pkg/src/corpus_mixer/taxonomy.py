"""Category registries: topics, formats, runtime cluster sets, and their product.

Category ids are assigned by lexicographic name order so that every run,
serialization, and shard agrees on the numbering without carrying extra
state around.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InvalidCategory, UnknownLabel

TOPIC_NAMES = (
    "Adult",
    "Art & Design",
    "Crime & Law",
    "Education & Jobs",
    "Entertainment",
    "Fashion & Beauty",
    "Finance & Business",
    "Food & Dining",
    "Games",
    "Hardware",
    "Health",
    "History",
    "Home & Hobbies",
    "Industrial",
    "Literature",
    "Politics",
    "Religion",
    "Science & Technology",
    "Social Life",
    "Software",
    "Software Development",
    "Sports & Fitness",
    "Transportation",
    "Travel",
)

FORMAT_NAMES = (
    "About (Org.)",
    "About (Personal)",
    "Academic Writing",
    "Audio Transcript",
    "Comment Section",
    "Content Listing",
    "Creative Writing",
    "Customer Support",
    "Documentation",
    "FAQ",
    "Knowledge Article",
    "Legal Notices",
    "Listicle",
    "News (Org.)",
    "News Article",
    "Nonfiction Writing",
    "Personal Blog",
    "Product Page",
    "Q&A Forum",
    "Spam / Ads",
    "Structured Data",
    "Truncated",
    "Tutorial",
    "User Review",
)

# Short forms used in published tables and figures, mapped to full names.
ABBREVIATIONS = {
    "science & tech.": "Science & Technology",
    "software dev.": "Software Development",
    "about (pers.)": "About (Personal)",
}

_PRODUCT_SEP = "|"


def _normalize(name: str) -> str:
    return re.sub(r"\s+", " ", name.strip()).lower()


@dataclass(frozen=True)
class Taxonomy:
    """Ordered, immutable category registry. Ids are positions in `names`."""

    kind: str  # "topic" | "format" | "cluster" | "product"
    names: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise InvalidCategory(f"{self.kind} taxonomy has duplicate names")
        index = {_normalize(n): i for i, n in enumerate(self.names)}
        object.__setattr__(self, "_index", index)

    @property
    def arity(self) -> int:
        return len(self.names)

    def name_of(self, cat_id: int) -> str:
        if not 0 <= cat_id < self.arity:
            raise InvalidCategory(f"{self.kind} id {cat_id} out of range 0..{self.arity - 1}")
        return self.names[cat_id]

    def valid_id(self, cat_id: int) -> bool:
        return 0 <= cat_id < self.arity

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "categories": [{"id": i, "name": n} for i, n in enumerate(self.names)],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Taxonomy":
        payload = json.loads(text)
        cats = sorted(payload["categories"], key=lambda c: c["id"])
        if [c["id"] for c in cats] != list(range(len(cats))):
            raise InvalidCategory("category ids must be exactly 0..arity-1")
        return cls(kind=payload["kind"], names=tuple(c["name"] for c in cats))


def resolve_label(name: str | int, tax: Taxonomy) -> int:
    """Map a label (possibly abbreviated or differently cased) to its id."""
    if isinstance(name, int):
        if not tax.valid_id(name):
            raise UnknownLabel(str(name), tax.kind)
        return name
    norm = _normalize(name)
    norm = _normalize(ABBREVIATIONS.get(norm, norm))
    cat_id = tax._index.get(norm)
    if cat_id is None:
        raise UnknownLabel(name, tax.kind)
    return cat_id


@lru_cache(maxsize=None)
def canonical_topics() -> Taxonomy:
    return Taxonomy(kind="topic", names=tuple(sorted(TOPIC_NAMES)))


@lru_cache(maxsize=None)
def canonical_formats() -> Taxonomy:
    return Taxonomy(kind="format", names=tuple(sorted(FORMAT_NAMES)))


def cluster_taxonomy(k: int) -> Taxonomy:
    """Runtime registry for k clusters; clusters have no inherent names."""
    if k < 1:
        raise InvalidCategory("cluster taxonomy needs k >= 1")
    width = max(2, len(str(k - 1)))
    return Taxonomy(kind="cluster", names=tuple(f"cluster-{i:0{width}d}" for i in range(k)))


def product_taxonomy(left: Taxonomy, right: Taxonomy) -> Taxonomy:
    """Cross product of two registries; cell id (a, b) = a * right.arity + b."""
    names = tuple(f"{ln}{_PRODUCT_SEP}{rn}" for ln in left.names for rn in right.names)
    return Taxonomy(kind="product", names=names)


def product_cell(left: Taxonomy, right: Taxonomy, a: int, b: int) -> int:
    if not (left.valid_id(a) and right.valid_id(b)):
        raise InvalidCategory(f"cell ({a}, {b}) out of range for {left.kind}x{right.kind}")
    return a * right.arity + b


def split_cell(left: Taxonomy, right: Taxonomy, cell: int) -> tuple[int, int]:
    if not 0 <= cell < left.arity * right.arity:
        raise InvalidCategory(f"product cell {cell} out of range")
    return divmod(cell, right.arity)


def parse_taxonomy_spec(spec: str) -> Taxonomy:
    """Parse the CLI taxonomy flag: topic | format | product | cluster:<k>."""
    spec = spec.strip().lower()
    if spec == "topic":
        return canonical_topics()
    if spec == "format":
        return canonical_formats()
    if spec == "product":
        return product_taxonomy(canonical_topics(), canonical_formats())
    if spec.startswith("cluster:"):
        return cluster_taxonomy(int(spec.split(":", 1)[1]))
    raise InvalidCategory(f"unknown taxonomy spec {spec!r}")
