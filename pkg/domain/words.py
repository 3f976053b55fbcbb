"""
Billiard words: admissibility rules, vertex-sequence moves, word classes and
the word/path correspondence.

Letters are 1-based labels in {1..p}; two letters alternate when they are
cyclically adjacent, p and 1 included.
"""
from collections import deque
from typing import Dict, List, Optional, Set, Tuple

from .exceptions import OutOfDepthError, ParameterError, ResourceError
from .models import (
    ClassEnumeration,
    Frame,
    Rule,
    TilingParams,
    TilingPath,
    Verdict,
    Violation,
    Word,
    WordClass,
)
from .tiling import EdgeLabeling, TilingGraph, tile_frames

DEFAULT_CLASS_CAP = 100000
DEFAULT_ENUM_BUDGET = 2000000

# (repeated-letter rule id, alternation rule id) per family
_RULE_IDS: Dict[Rule, Tuple[str, str]] = {
    Rule.E: ("E1", "E2"),
    Rule.O_UPPER: ("O1", "O2"),
    Rule.O_LOWER: ("O1", "O-lower"),
}


def adjacent(a: int, b: int, p: int) -> bool:
    return (a - b) % p in (1, p - 1)


def alternation_threshold(params: TilingParams, rule: Rule) -> int:
    """Shortest forbidden alternating block under the rule family"""
    require_rule_parity(params, rule)
    q = params.q
    if rule is Rule.E:
        return q // 2 + 1
    if rule is Rule.O_UPPER:
        return (q + 3) // 2
    return (q - 1) // 2


def require_rule_parity(params: TilingParams, rule: Rule) -> None:
    if rule.needs_even_q != params.q_even:
        parity = "even" if params.q_even else "odd"
        raise ParameterError(f"rule {rule.value} is unsupported for {parity} q={params.q}")


def validate_word(word: Word, p: int) -> None:
    for i, letter in enumerate(word):
        if not 1 <= letter <= p:
            raise ParameterError(f"letter {letter} at position {i + 1} is outside 1..{p}")


def _alternation_lengths(word: Word, p: int) -> List[int]:
    """Length of the alternating block ending at each position"""
    runs: List[int] = []
    for i, letter in enumerate(word):
        if i == 0:
            runs.append(1)
        elif adjacent(letter, word[i - 1], p):
            if runs[i - 1] == 1 or letter == word[i - 2]:
                runs.append(runs[i - 1] + 1)
            else:
                runs.append(2)
        else:
            runs.append(1)
    return runs


def check_admissible(word: Word, params: TilingParams, rule: Rule) -> Verdict:
    """
    Report the first forbidden subword, scanning left to right.

    Args:
        word: Letters in 1..p
        params: Tiling parameters; q's parity must match the rule family
        rule: E (even q), O_UPPER or O_LOWER (odd q)

    Returns:
        Verdict with a 1-based violation position when not admissible

    Raises:
        ParameterError: On parity mismatch or letters outside the alphabet
    """
    validate_word(word, params.p)
    threshold = alternation_threshold(params, rule)
    repeat_id, alternation_id = _RULE_IDS[rule]
    runs = _alternation_lengths(word, params.p)
    for i, letter in enumerate(word):
        if i > 0 and letter == word[i - 1]:
            return Verdict(False, Violation(repeat_id, i, 2))
        if runs[i] >= threshold:
            return Verdict(False, Violation(alternation_id, i - threshold + 2, threshold))
    return Verdict(True)


def vertex_sequence_neighbors(word: Word, params: TilingParams) -> Set[Word]:
    """Words reached by swapping the phase of one alternating block of length q/2"""
    if not params.q_even:
        raise ParameterError("vertex-sequence moves are defined for even q only")
    half = params.q // 2
    runs = _alternation_lengths(word, params.p)
    found: Set[Word] = set()
    for end in range(half - 1, len(word)):
        if runs[end] < half:
            continue
        start = end - half + 1
        a, b = word[start], word[start + 1]
        swapped = tuple(b if k % 2 == 0 else a for k in range(half))
        found.add(word[:start] + swapped + word[end + 1:])
    return found


def word_class(
    word: Word, params: TilingParams, cap: int = DEFAULT_CLASS_CAP
) -> WordClass:
    """
    Closure of a word under vertex-sequence moves.

    Raises:
        ParameterError: If q is odd
        ResourceError: If the closure grows past cap members
    """
    if not params.q_even:
        raise ParameterError("word classes are defined for even q only")
    validate_word(word, params.p)
    members = {word}
    queue = deque([word])
    while queue:
        current = queue.popleft()
        for nxt in vertex_sequence_neighbors(current, params):
            if nxt in members:
                continue
            members.add(nxt)
            if len(members) > cap:
                raise ResourceError(
                    f"class of {format_word(word, params.p)} exceeds {cap} members"
                )
            queue.append(nxt)
    admissible = all(check_admissible(m, params, Rule.E).admissible for m in members)
    return WordClass(frozenset(members), min(members), admissible)


def enumerate_admissible_classes(
    params: TilingParams,
    n: int,
    budget: int = DEFAULT_ENUM_BUDGET,
    cap: int = DEFAULT_CLASS_CAP,
) -> ClassEnumeration:
    """
    Count word classes of length n all of whose members are admissible.

    Admissible words are generated depth first with incremental rule checks;
    each one not yet seen is closed into its class and every member is marked.

    Raises:
        ParameterError: If q is odd or n < 0
        ResourceError: If more than budget prefixes are visited
    """
    if not params.q_even:
        raise ParameterError("admissible classes are enumerated for even q only")
    if n < 0:
        raise ParameterError(f"length must be >= 0, got {n}")
    p = params.p
    threshold = alternation_threshold(params, Rule.E)
    seen: Set[Word] = set()
    representatives: List[Word] = []
    visited = 0
    # stack of (prefix, alternating length at its end)
    stack: List[Tuple[Word, int]] = [((), 0)]
    while stack:
        prefix, run = stack.pop()
        visited += 1
        if visited > budget:
            raise ResourceError(f"enumeration of length-{n} words exceeded {budget} steps")
        if len(prefix) == n:
            if prefix in seen:
                continue
            cls = word_class(prefix, params, cap)
            seen.update(cls.members)
            if cls.class_admissible:
                representatives.append(cls.canonical)
            continue
        for letter in range(p, 0, -1):
            if prefix and letter == prefix[-1]:
                continue
            if not prefix:
                nxt_run = 1
            elif adjacent(letter, prefix[-1], p) and (run == 1 or letter == prefix[-2]):
                nxt_run = run + 1
            elif adjacent(letter, prefix[-1], p):
                nxt_run = 2
            else:
                nxt_run = 1
            if nxt_run >= threshold:
                continue
            stack.append((prefix + (letter,), nxt_run))
    representatives.sort()
    return ClassEnumeration(len(representatives), tuple(representatives))


def parse_word(text: str, p: int, zero_based: bool = False) -> Word:
    """
    Read a word written as digits ("1212") or comma-separated letters.

    Raises:
        ParameterError: On non-numeric tokens or letters outside the alphabet
    """
    text = text.strip()
    if not text:
        return ()
    tokens = [t.strip() for t in text.split(",")] if "," in text or p > 9 else list(text)
    try:
        letters = tuple(int(t) + (1 if zero_based else 0) for t in tokens)
    except ValueError as e:
        raise ParameterError(f"cannot parse word {text!r}: {e}") from e
    validate_word(letters, p)
    return letters


def format_word(word: Word, p: int, zero_based: bool = False) -> str:
    shift = 1 if zero_based else 0
    sep = "," if p > 9 else ""
    return sep.join(str(letter - shift) for letter in word)


def _start_frame(g: TilingGraph, tile: int) -> Frame:
    if g.params.q_even:
        frames = tile_frames(g)
        if tile not in frames:
            raise OutOfDepthError(f"tile {tile} is not connected to the base tile")
        return frames[tile]
    return Frame(0, 1)


def word_to_path(
    word: Word,
    g: TilingGraph,
    base: Optional[int] = None,
    frame: Optional[Frame] = None,
) -> TilingPath:
    """
    Follow a word from a tile by crossing the edge carrying each letter.

    For even q the start frame is the tile's frame in the global labeling;
    for odd q it is the identity frame of the start tile, reflected along
    the path.

    Raises:
        OutOfDepthError: If the path leaves the generated region
    """
    validate_word(word, g.p)
    t = g.base_tile if base is None else base
    if not 0 <= t < g.num_tiles:
        raise OutOfDepthError(f"tile {t} was not generated")
    current = _start_frame(g, t) if frame is None else frame
    tiles = [t]
    edges: List[int] = []
    for i, letter in enumerate(word):
        slot = current.slot_of(letter, g.p)
        nb = g.tile_neighbor(t, slot)
        if nb is None:
            raise OutOfDepthError(
                f"letter {i + 1} of the word leaves the generated region at tile {t}"
            )
        edges.append(g.tile_slots[t][slot])
        current = current.reflect(slot, nb[1], g.p)
        t = nb[0]
        tiles.append(t)
    return TilingPath(tuple(tiles), tuple(edges), g)


def path_to_word(
    path: TilingPath,
    labeling: Optional[EdgeLabeling] = None,
    base_frame: Optional[Frame] = None,
) -> Word:
    """Labels of the crossed edges, from a global labeling or propagated frames"""
    if labeling is not None:
        return tuple(labeling.label[e] for e in path.edges)
    g = path.graph
    current = _start_frame(g, path.start) if base_frame is None else base_frame
    letters: List[int] = []
    for t, e, nxt in zip(path.tiles, path.edges, path.tiles[1:]):
        slot = g.slot_in_tile(t, e)
        letters.append(current.label(slot, g.p))
        current = current.reflect(slot, g.slot_in_tile(nxt, e), g.p)
    return tuple(letters)
