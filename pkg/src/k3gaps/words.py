"""Free-group word engine.

Words live over two alphabets that can be mixed freely:

* abstract generators ("g1", "g2", ...), whose formal inverses are
  distinct letters (written "g1'"), and
* the involution alphabet ("x", "y", "z"), where each letter is its
  own inverse.

Stored words are always reduced.  The derived-level machinery keeps
iterated commutators as trees with shared references to lower-level
elements, since full expansion grows like 4**n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

INVOLUTION_GENS = ("x", "y", "z")


class WordError(ValueError):
    """Raised for malformed letters or words outside an operation's domain."""


class LevelSizeError(RuntimeError):
    """A derived-level set exceeded the configured cardinality cap."""


class Letter(NamedTuple):
    gen: str
    inv: bool = False

    def inverse(self) -> "Letter":
        if self.gen in INVOLUTION_GENS:
            return self
        return Letter(self.gen, not self.inv)

    def __str__(self) -> str:
        return self.gen + ("'" if self.inv else "")


def parse_letter(tok: str) -> Letter:
    inv = tok.endswith("'")
    gen = tok[:-1] if inv else tok
    if not gen:
        raise WordError("empty letter token")
    if gen in INVOLUTION_GENS:
        if inv:
            raise WordError(f"involution letter {gen!r} takes no inverse mark")
        return Letter(gen)
    if not (gen[0] == "g" and gen[1:].isdigit()):
        raise WordError(f"unknown letter {tok!r}")
    return Letter(gen, inv)


@dataclass(frozen=True)
class Word:
    """A reduced word.  The empty word is the identity."""

    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        # reversal of a reduced word is reduced
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def in_involution_alphabet(self) -> bool:
        return all(l.gen in INVOLUTION_GENS for l in self.letters)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)

    @staticmethod
    def parse(text: str) -> "Word":
        return reduce(parse_letter(t) for t in text.split())


def reduce(letters: Iterable[Letter]) -> Word:
    """Freely reduce a raw letter sequence.

    Reduction by a stack scan is confluent: the reduced form does not
    depend on the order cancellations are applied.
    """
    out: list[Letter] = []
    for l in letters:
        if out and out[-1] == l.inverse():
            out.pop()
        else:
            out.append(l)
    return Word(tuple(out))


def commutator(w1: Word, w2: Word) -> Word:
    """[w1, w2] = w1 w2 w1^-1 w2^-1, reduced."""
    return reduce(
        w1.letters
        + w2.letters
        + w1.inverse().letters
        + w2.inverse().letters
    )


def abstract_generators(k: int) -> list[Word]:
    """The standard seed set for the free group on k generators:
    g1..gk followed by their inverses (2k words, closed under inversion)."""
    gens = [Word((Letter(f"g{i + 1}"),)) for i in range(k)]
    return gens + [w.inverse() for w in gens]


# ---------------------------------------------------------------------------
# derived series


@dataclass(frozen=True)
class CommutatorTree:
    """A derived-series element: either a seed leaf or a commutator node.

    ``word`` caches the reduced expansion in seed letters; construction
    guarantees it is nonempty for stored elements (trivial commutators
    are omitted from level sets).
    """

    level: int
    word: Word
    left: Optional["CommutatorTree"] = None
    right: Optional["CommutatorTree"] = None

    @staticmethod
    def leaf(seed: Word) -> "CommutatorTree":
        if seed.is_identity():
            raise WordError("seed words must be nontrivial")
        return CommutatorTree(0, seed)

    @staticmethod
    def node(left: "CommutatorTree", right: "CommutatorTree") -> "CommutatorTree":
        if left.level != right.level:
            raise WordError("commutator children must share a level")
        return CommutatorTree(
            left.level + 1, commutator(left.word, right.word), left, right
        )


def _check_seed_closure(seeds: Sequence[Word]) -> None:
    words = set(w.letters for w in seeds)
    for w in seeds:
        if w.inverse().letters not in words:
            raise WordError("seed set must be closed under inversion")


DEFAULT_LEVEL_CAP = 100_000


def derived_level(
    seeds: Sequence[Word], n: int, cap: int = DEFAULT_LEVEL_CAP
) -> list[CommutatorTree]:
    """The full level-n set, ordered lexicographically by (left, right)
    index of the constituent pair.  Elements with empty reduced expansion
    (commutators of commuting pairs such as [a, a^-1] and [a, a]) are
    dropped."""
    if n < 0:
        raise WordError("level must be nonnegative")
    _check_seed_closure(seeds)
    level = [CommutatorTree.leaf(w) for w in seeds]
    for _ in range(n):
        nxt: list[CommutatorTree] = []
        for u in level:
            for v in level:
                c = commutator(u.word, v.word)
                if c:
                    nxt.append(CommutatorTree(u.level + 1, c, u, v))
                    if len(nxt) > cap:
                        raise LevelSizeError(
                            f"level set exceeds cap {cap}; level sets grow "
                            "quadratically, raise the cap or use level_prefix"
                        )
        level = nxt
    return level


def level_prefix(
    seeds: Sequence[Word], n: int, count: int, cap: int = DEFAULT_LEVEL_CAP
) -> list[CommutatorTree]:
    """The first ``count`` elements of the level-n set in the canonical
    lexicographic order, generated lazily.  Only a prefix of each lower
    level is materialized, so this stays cheap at depths where the full
    set is intractable."""
    if n == 0:
        return [CommutatorTree.leaf(w) for w in seeds[:count]]
    # a prefix of length count never consumes more than count+2 parents:
    # each parent u contributes at least len(prev)-2 nonempty pairs (u,v)
    prev = level_prefix(seeds, n - 1, max(count + 2, 4), cap)
    out: list[CommutatorTree] = []
    for u in prev:
        for v in prev:
            c = commutator(u.word, v.word)
            if c:
                out.append(CommutatorTree(u.level + 1, c, u, v))
                if len(out) >= count:
                    return out
    return out


def iter_level_words(
    seeds: Sequence[Word], n: int, cap: int = DEFAULT_LEVEL_CAP
) -> Iterator[Word]:
    """Lazily iterate the reduced words of level n in canonical order.
    Lower levels are materialized in full (subject to the cap), the top
    level streams."""
    if n == 0:
        yield from seeds
        return
    prev = [t.word for t in derived_level(seeds, n - 1, cap)]
    for u in prev:
        for v in prev:
            c = commutator(u, v)
            if c:
                yield c


# ---------------------------------------------------------------------------
# kernel of Gamma_sigma -> (Z/2)^3


def klein_image(w: Word) -> tuple[int, int, int]:
    """Componentwise parity of x/y/z letter counts."""
    counts = {g: 0 for g in INVOLUTION_GENS}
    for l in w.letters:
        if l.gen not in counts:
            raise WordError(f"letter {l} is outside the involution alphabet")
        counts[l.gen] ^= 1
    return (counts["x"], counts["y"], counts["z"])


def schreier_generators() -> list[Word]:
    """Five free generators of the kernel of the parity map, expanded
    into involution letters.

    With a = xy and b = yz (which generate the index-2 kernel of the
    total-parity map), the Schreier generators over the transversal
    {e, a, b, ab} are a^2, b^2, [b,a], abab^-1 and ab^2a^-1.
    """
    a = Word.parse("x y")
    b = Word.parse("y z")
    return [
        a * a,
        b * b,
        commutator(b, a),
        a * b * a * b.inverse(),
        a * b * b * a.inverse(),
    ]


def substitute(w: Word, images: dict[str, Word]) -> Word:
    """Replace each abstract generator by its image word, reducing the
    result.  Inverse letters map to the inverse of the image."""
    out: list[Letter] = []
    for l in w.letters:
        img = images.get(l.gen)
        if img is None:
            out.append(l)
        else:
            out.extend((img.inverse() if l.inv else img).letters)
    return reduce(out)


# ---------------------------------------------------------------------------
# fast ramification


@dataclass
class RamificationReport:
    k: int
    trials: int
    max_factors: int
    min_slack: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_fast_ramification(
    k: int, trials: int, max_n: int = 50, seed: int = 0
) -> RamificationReport:
    """Randomized check that admissible products of N commutators
    [a_i, a_j] reduce to at least 2N+2 letters.

    Admissibility forbids only the obvious cancellation of consecutive
    mutually-inverse factors [a_i, a_j][a_j, a_i].
    """
    if k < 2:
        raise WordError("need at least two generators")
    rng = random.Random(seed)
    min_slack = None
    violations: list[str] = []
    for _ in range(trials):
        n = rng.randint(1, max_n)
        pairs: list[tuple[int, int]] = []
        while len(pairs) < n:
            i, j = rng.randrange(k), rng.randrange(k)
            if i == j:
                continue
            if pairs and pairs[-1] == (j, i):
                continue
            pairs.append((i, j))
        raw: list[Letter] = []
        for i, j in pairs:
            gi, gj = Letter(f"g{i + 1}"), Letter(f"g{j + 1}")
            raw += [gi, gj, gi.inverse(), gj.inverse()]
        reduced = reduce(raw)
        slack = len(reduced) - (2 * n + 2)
        if min_slack is None or slack < min_slack:
            min_slack = slack
        if slack < 0:
            violations.append(" ".join(f"[g{i + 1},g{j + 1}]" for i, j in pairs))
    return RamificationReport(k, trials, max_n, min_slack or 0, violations)


# ---------------------------------------------------------------------------
# Cayley-tree branching


@dataclass
class TreePathReport:
    depth: int
    per_level_min: list[int]
    lower_bound: int


def tree_path_count(
    depth: int,
    seeds: Optional[Sequence[Word]] = None,
    branch_target: int = 3,
    cap: int = DEFAULT_LEVEL_CAP,
) -> TreePathReport:
    """Verified lower bound on distinct infinite-path prefixes in the
    commutator tree.

    A leaf s at level n branches to the commutators [s, t] with t in
    the level-n set whose reduced word strictly extends s.  Counting
    stops at ``branch_target`` extensions per leaf, so the reported
    per-level minima are verified lower bounds."""
    if seeds is None:
        seeds = abstract_generators(5)
    if len(seeds) < 8:
        raise WordError("tree branching counts require at least 8 seeds (k >= 4)")
    _check_seed_closure(seeds)
    if depth == 0:
        return TreePathReport(0, [], 1)
    per_level_min: list[int] = []
    bound = 1
    leaves = list(seeds)
    for level in range(depth):
        candidates = list(iter_level_words(seeds, level, cap)) if level > 0 else list(seeds)
        min_branch = None
        new_leaves: list[Word] = []
        for s in leaves:
            s_inv = s.inverse()
            found: list[Word] = []
            for t in candidates:
                if t == s or t == s_inv:
                    continue
                w = commutator(s, t)
                if w and len(w) > len(s) and w.letters[: len(s)] == s.letters:
                    found.append(w)
                    if len(found) >= branch_target:
                        break
            min_branch = len(found) if min_branch is None else min(min_branch, len(found))
            new_leaves.extend(found)
        assert min_branch is not None
        if min_branch < 3:
            raise LevelSizeError(
                f"branching {min_branch} < 3 at level {level}; "
                "uncountability bound fails for this seed set"
            )
        per_level_min.append(min_branch)
        bound *= min_branch
        leaves = new_leaves
    return TreePathReport(depth, per_level_min, bound)


def level_manifest(seeds: Sequence[Word], levels: list[list[CommutatorTree]]) -> dict:
    """JSON-serializable manifest of level sets, with tree structure
    recorded by index into the previous level."""
    out: dict = {"seeds": [str(w) for w in seeds], "levels": []}
    for n, level in enumerate(levels):
        if n == 0:
            out["levels"].append([{"seed": str(t.word)} for t in level])
            continue
        # children are matched by identity when the levels share objects,
        # falling back to the reduced word (levels built independently)
        by_id = {id(t): i for i, t in enumerate(levels[n - 1])}
        by_word = {}
        for i, t in enumerate(levels[n - 1]):
            by_word.setdefault(t.word.letters, i)

        def locate(t: CommutatorTree) -> int:
            if id(t) in by_id:
                return by_id[id(t)]
            return by_word[t.word.letters]

        out["levels"].append(
            [{"left": locate(t.left), "right": locate(t.right)} for t in level]
        )
    return out
