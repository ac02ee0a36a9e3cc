"""WordPiece tokenization from a vocabulary file, token counting, and length histograms."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Sequence

from .corpus import LabeledSentence
from .errors import DuplicateTokenError, MissingUnkError

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
CONTINUATION_PREFIX = "##"

# Words longer than this go straight to [UNK] (standard WordPiece guard).
MAX_WORD_CHARS = 100


@dataclass
class Vocabulary:
    tokens: list[str]
    token_to_id: dict[str, int]
    has_pad: bool
    has_cls: bool
    has_sep: bool

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, self.token_to_id[UNK_TOKEN])


def load_vocab(raw: bytes) -> Vocabulary:
    """Load a one-token-per-line UTF-8 vocabulary; line number = token id."""
    lines = raw.decode("utf-8").splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    token_to_id: dict[str, int] = {}
    for i, token in enumerate(lines):
        if token in token_to_id:
            raise DuplicateTokenError(token)
        token_to_id[token] = i
    if UNK_TOKEN not in token_to_id:
        raise MissingUnkError(f"vocabulary has no {UNK_TOKEN} token")
    return Vocabulary(
        tokens=lines,
        token_to_id=token_to_id,
        has_pad=PAD_TOKEN in token_to_id,
        has_cls=CLS_TOKEN in token_to_id,
        has_sep=SEP_TOKEN in token_to_id,
    )


def _is_punctuation(char: str) -> bool:
    cp = ord(char)
    # All non-alphanumeric ASCII counts as punctuation, matching the
    # conventional BERT basic tokenizer.
    if 33 <= cp <= 47 or 58 <= cp <= 64 or 91 <= cp <= 96 or 123 <= cp <= 126:
        return True
    return unicodedata.category(char).startswith("P")


def _strip_accents(text: str) -> str:
    return "".join(c for c in unicodedata.normalize("NFD", text) if unicodedata.category(c) != "Mn")


def basic_tokenize(text: str, lowercase: bool = True) -> list[str]:
    """Whitespace + punctuation split; lower-cases and strips accents when uncased."""
    if lowercase:
        text = _strip_accents(text.lower())
    words: list[str] = []
    current: list[str] = []
    for char in text:
        if char.isspace() or unicodedata.category(char) in ("Cc", "Cf"):
            if current:
                words.append("".join(current))
                current = []
        elif _is_punctuation(char):
            if current:
                words.append("".join(current))
                current = []
            words.append(char)
        else:
            current.append(char)
    if current:
        words.append("".join(current))
    return words


def _wordpiece_split(word: str, vocab: Vocabulary) -> list[str]:
    if len(word) > MAX_WORD_CHARS:
        return [UNK_TOKEN]
    pieces: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        piece = None
        # Greedy longest-match-first scan.
        while start < end:
            candidate = word[start:end]
            if start > 0:
                candidate = CONTINUATION_PREFIX + candidate
            if candidate in vocab:
                piece = candidate
                break
            end -= 1
        if piece is None:
            return [UNK_TOKEN]
        pieces.append(piece)
        start = end
    return pieces


def wordpiece_tokenize(text: str, vocab: Vocabulary, lowercase: bool = True) -> list[str]:
    """Basic tokenization followed by greedy longest-match subword splitting."""
    tokens: list[str] = []
    for word in basic_tokenize(text, lowercase=lowercase):
        tokens.extend(_wordpiece_split(word, vocab))
    return tokens


def token_count(text: str, vocab: Vocabulary, include_special: bool = False, lowercase: bool = True) -> int:
    """Number of WordPiece tokens, plus two when counting [CLS] and [SEP]."""
    n = len(wordpiece_tokenize(text, vocab, lowercase=lowercase))
    return n + 2 if include_special else n


@dataclass
class HistogramReport:
    bin_edges: list[int]
    bin_counts: list[int]
    min_tokens: int
    max_tokens: int
    mean_tokens: float
    n_records: int


def length_histogram(
    records: Sequence[LabeledSentence],
    vocab: Vocabulary,
    bin_width: int = 10,
    include_special: bool = False,
) -> HistogramReport:
    """Token-length histogram with bins [0,w), [w,2w), ... covering the maximum."""
    if bin_width < 1:
        raise ValueError(f"bin_width must be >= 1, got {bin_width}")
    # Always recount from text so the include_special convention is uniform;
    # stored n_tokens values include the special tokens and would skew
    # figure-style histograms.
    counts = [token_count(r.text, vocab, include_special) for r in records]
    if not counts:
        return HistogramReport([0, bin_width], [0], 0, 0, 0.0, 0)
    lo, hi = min(counts), max(counts)
    n_bins = hi // bin_width + 1
    edges = [i * bin_width for i in range(n_bins + 1)]
    bins = [0] * n_bins
    for c in counts:
        bins[c // bin_width] += 1
    return HistogramReport(edges, bins, lo, hi, sum(counts) / len(counts), len(counts))


def histogram_csv(report: HistogramReport) -> str:
    """CSV rows ``bin_start,bin_end,count`` plus a trailing summary comment row."""
    lines = ["bin_start,bin_end,count"]
    for i, count in enumerate(report.bin_counts):
        lines.append(f"{report.bin_edges[i]},{report.bin_edges[i + 1]},{count}")
    lines.append(
        f"# summary: min={report.min_tokens} max={report.max_tokens} "
        f"mean={report.mean_tokens:.4f} n={report.n_records}"
    )
    return "\n".join(lines) + "\n"
