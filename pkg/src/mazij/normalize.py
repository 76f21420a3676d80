"""Arabic-aware text canonicalization and character shingling.

The canonical form is what every matching filter in the pipeline (exact
n-gram, MinHash/Jaccard, containment hooks) operates on. The rule set is
fixed and versioned so that indexes, manifests, and reports built with
different rule revisions never get mixed silently.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field

# Bump whenever any canonicalization rule changes. Persisted indexes and
# manifests embed this string and refuse to mix versions.
NORMALIZATION_VERSION = "mazij-norm-1"

DEFAULT_SHINGLE_WIDTH = 5

# Harakat: tanwin (064B-064D), fatha/damma/kasra (064E-0650), shadda (0651),
# sukun (0652). The hamza/madda combining marks (0653-0655) are included so
# that decomposed alef variants fold the same way as precomposed ones.
_ARABIC_MARKS = re.compile(r"[ً-ٕ]")
_TATWEEL = "ـ"

_ALEF_VARIANTS = str.maketrans({
    "آ": "ا",  # alef with madda
    "أ": "ا",  # alef with hamza above
    "إ": "ا",  # alef with hamza below
    "ى": "ي",  # alef maqsura -> ya
})

_WHITESPACE_RUN = re.compile(r"\s+")


def _strip_punctuation(text: str) -> str:
    out = []
    for ch in text:
        if unicodedata.category(ch).startswith("P"):
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def canonicalize(text: str) -> str:
    """Apply the full normalization rule chain, in order.

    Compatibility normalization; Arabic diacritic and tatweel removal;
    alef/ya folding; Latin case folding; punctuation to single spaces;
    whitespace-run collapse; edge trim. Idempotent.
    """
    s = unicodedata.normalize("NFKC", text)
    s = _ARABIC_MARKS.sub("", s.replace(_TATWEEL, ""))
    # Mark removal can unblock canonical compositions that the first pass
    # left apart (e.g. a stripped tatweel sitting between a base letter and
    # a combining accent), so normalize once more before folding.
    s = unicodedata.normalize("NFKC", s)
    s = s.translate(_ALEF_VARIANTS)
    s = s.casefold()
    s = _strip_punctuation(s)
    s = _WHITESPACE_RUN.sub(" ", s)
    return s.strip()


def shingles(canonical: str, width: int = DEFAULT_SHINGLE_WIDTH) -> Counter:
    """Multiset of fixed-width character shingles of a canonical string.

    Strings shorter than ``width`` contribute themselves as a single
    shingle; the empty string contributes nothing.
    """
    if width < 1:
        raise ValueError(f"shingle width must be >= 1, got {width}")
    if not canonical:
        return Counter()
    if len(canonical) < width:
        return Counter({canonical: 1})
    return Counter(canonical[i:i + width] for i in range(len(canonical) - width + 1))


@dataclass(frozen=True)
class NormalizedText:
    """A canonical string plus its character-shingle multiset."""

    canonical: str
    shingles: Counter = field(compare=False)
    shingle_width: int = DEFAULT_SHINGLE_WIDTH

    def shingle_set(self) -> frozenset:
        return frozenset(self.shingles)


def normalize(text: str, shingle_width: int = DEFAULT_SHINGLE_WIDTH) -> NormalizedText:
    """Canonicalize ``text`` and shingle the result."""
    canonical = canonicalize(text)
    return NormalizedText(
        canonical=canonical,
        shingles=shingles(canonical, shingle_width),
        shingle_width=shingle_width,
    )
