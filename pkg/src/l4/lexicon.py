"""Phrase templates and the small English morphology the realizer needs.

Lexicon annotations come in two shapes: a verb with an optional preposition
("participate in"), or a placeholder template whose bracketed class names fix
the surface argument order ("[Player] wins [Game]"). Keys without an entry
fall back to the predicate name itself.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .sem import NormalizedPredicate
from .source import L4Error


class LexiconError(L4Error):
    pass


class SlotClassMismatch(LexiconError):
    pass


# ── Morphology ───────────────────────────────────────────────────


@dataclass(frozen=True)
class NounEntry:
    plural: str
    animate: bool = False


_DEFAULT_NOUNS = {
    "player": NounEntry("players", animate=True),
    "participant": NounEntry("participants", animate=True),
    "game": NounEntry("games"),
    "sign": NounEntry("signs"),
}

_IRREGULAR_3SG = {"be": "is", "do": "does", "have": "has", "go": "goes"}
_LEMMA_OF_3SG = {v: k for k, v in _IRREGULAR_3SG.items()}

_SIBILANT = ("s", "x", "z", "ch", "sh")
_VOWELS = "aeiou"


class MorphLexicon:
    """Noun plurals/animacy plus irregular verb forms; read-only after load."""

    def __init__(self, nouns: Optional[dict[str, NounEntry]] = None):
        self.nouns = dict(_DEFAULT_NOUNS)
        if nouns:
            self.nouns.update(nouns)
        self.irregular_verbs = dict(_IRREGULAR_3SG)

    @classmethod
    def load(cls, text: str) -> "MorphLexicon":
        """Parse the noun config: one ``word,plural[,animate]`` line per noun."""
        nouns: dict[str, NounEntry] = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            cols = [c.strip() for c in line.split(",")]
            if len(cols) < 2:
                raise LexiconError(f"bad morph lexicon line: {raw!r}")
            animate = len(cols) > 2 and cols[2].lower() in ("animate", "yes", "true", "1")
            nouns[cols[0].lower()] = NounEntry(cols[1].lower(), animate)
        return cls(nouns)

    @classmethod
    def load_file(cls, path: str) -> "MorphLexicon":
        with open(path, encoding="utf-8") as handle:
            return cls.load(handle.read())

    def noun_plural(self, noun: str) -> str:
        entry = self.nouns.get(noun)
        if entry:
            return entry.plural
        return _regular_plural(noun)

    def is_animate_noun(self, noun: str) -> bool:
        entry = self.nouns.get(noun)
        if entry is None and " " in noun:
            entry = self.nouns.get(noun.rsplit(" ", 1)[-1])
        return bool(entry and entry.animate)


def _regular_plural(word: str) -> str:
    if word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if word.endswith(_SIBILANT):
        return word + "es"
    return word + "s"


def inflect_verb(lemma: str, plural: bool = False, morph: Optional[MorphLexicon] = None) -> str:
    """Inflect a lowercase lemma for a 3rd-person subject."""
    irregular = (morph.irregular_verbs if morph else _IRREGULAR_3SG)
    if plural:
        return "are" if lemma == "be" else lemma
    if lemma in irregular:
        return irregular[lemma]
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ies"
    if lemma.endswith(_SIBILANT):
        return lemma + "es"
    return lemma + "s"


def verb_lemma(word: str) -> str:
    """Undo 3sg agreement so "participates in" and "participate in" coincide."""
    word = word.lower()
    if word in _LEMMA_OF_3SG:
        return _LEMMA_OF_3SG[word]
    if word.endswith("ies") and len(word) > 3:
        return word[:-3] + "y"
    if word.endswith("es") and word[:-2].endswith(_SIBILANT):
        return word[:-2]
    if word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    return word


def indef_article(noun: str) -> str:
    return "an" if noun[:1].lower() in _VOWELS else "a"


def class_noun(class_name: str) -> str:
    """Class identifier → English noun: camelCase splits into words."""
    return re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", class_name).lower()


def is_animate(class_name: str, morph: MorphLexicon) -> bool:
    """Classes whose noun is unmarked in the morph lexicon default to inanimate."""
    return morph.is_animate_noun(class_noun(class_name))


# ── Phrase templates ─────────────────────────────────────────────


@dataclass(frozen=True)
class Lit:
    text: str


@dataclass(frozen=True)
class Arg:
    position: int


TailPart = Union[Lit, Arg]


@dataclass(frozen=True)
class PhrasePlan:
    """How a predicate is said: subject argument, verb lemma, and the tail.

    ``kind`` records the source shape ("verb" entry, "slots" template, or
    "fallback" from the predicate name).
    """

    kind: str
    subject_arg: int
    verb_lemma: str
    tail: tuple[TailPart, ...]


@dataclass(frozen=True)
class NounPlan:
    """A class-keyed entry overriding the class noun."""

    noun: str


_SLOT_RE = re.compile(r"\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]")


def parse_entry(raw: str, predicate: NormalizedPredicate) -> PhrasePlan:
    """Parse a lexicon surface string against the predicate's argument classes."""
    raw = raw.strip()
    if not raw:
        raise LexiconError(f"empty lexicon entry for {predicate.name}")
    if "[" in raw:
        return _parse_slots(raw, predicate, kind="slots")
    words = raw.split()
    lemma = verb_lemma(words[0])
    particles = [Lit(w) for w in words[1:]]
    return PhrasePlan("verb", 0, lemma, _default_tail(predicate.arity, particles))


def _default_tail(arity: int, particles: list[Lit]) -> tuple[TailPart, ...]:
    # default order subject-object-indirect object; particles sit before the
    # last argument ("participate in RPS", "give X to Y")
    if arity <= 1:
        return tuple(particles)
    middle = [Arg(i) for i in range(1, arity - 1)]
    return tuple(middle + particles + [Arg(arity - 1)])


def _parse_slots(raw: str, predicate: NormalizedPredicate, kind: str) -> PhrasePlan:
    parts: list[Union[Lit, str]] = []  # str marks a slot class name
    pos = 0
    for m in _SLOT_RE.finditer(raw):
        for word in raw[pos : m.start()].split():
            parts.append(Lit(word))
        parts.append(m.group(1))
        pos = m.end()
    for word in raw[pos:].split():
        parts.append(Lit(word))

    slot_classes = [p for p in parts if isinstance(p, str)]
    if sorted(slot_classes) != sorted(predicate.arg_classes):
        raise SlotClassMismatch(
            f"template for {predicate.name} names classes {slot_classes}, "
            f"predicate has {list(predicate.arg_classes)}"
        )
    # map each slot to the leftmost unused argument position of its class
    free = list(range(predicate.arity))
    resolved: list[TailPart] = []
    for p in parts:
        if isinstance(p, Lit):
            resolved.append(p)
            continue
        position = next(i for i in free if predicate.arg_classes[i] == p)
        free.remove(position)
        resolved.append(Arg(position))

    if not isinstance(resolved[0], Arg):
        raise LexiconError(
            f"template for {predicate.name} must start with its subject slot"
        )
    subject = resolved[0].position
    rest = resolved[1:]
    if not rest or not isinstance(rest[0], Lit):
        raise LexiconError(f"template for {predicate.name} needs a verb after the subject slot")
    lemma = verb_lemma(rest[0].text)
    return PhrasePlan(kind, subject, lemma, tuple(rest[1:]))


def fallback_plan(predicate: NormalizedPredicate) -> PhrasePlan:
    """No lexicon entry: the predicate name itself is read as a verb phrase."""
    words = class_noun(predicate.name).split()
    lemma = verb_lemma(words[0])
    particles = [Lit(w) for w in words[1:]]
    return PhrasePlan("fallback", 0, lemma, _default_tail(predicate.arity, particles))


class LexiconTable:
    """Resolved phrase plans per predicate plus class-noun overrides."""

    def __init__(self, plans: dict[str, PhrasePlan], class_nouns: dict[str, str]):
        self.plans = plans
        self.class_nouns = class_nouns

    def plan(self, predicate: NormalizedPredicate) -> PhrasePlan:
        hit = self.plans.get(predicate.asp_name)
        return hit if hit is not None else fallback_plan(predicate)

    def noun_for(self, class_name: str) -> str:
        return self.class_nouns.get(class_name, class_noun(class_name))


def build_lexicon(program) -> LexiconTable:
    """Collect the program's lexicon entries into a lookup table."""
    plans: dict[str, PhrasePlan] = {}
    class_nouns: dict[str, str] = {}
    for entry in program.lexicon_entries:
        pred = program.predicate(entry.key)
        if pred is not None and not pred.is_membership:
            plans[pred.asp_name] = parse_entry(entry.surface, pred)
            continue
        info = program.class_info(entry.key)
        if info is not None:
            class_nouns[info.name] = entry.surface.strip().lower()
            continue
        raise LexiconError(f"lexicon entry for unknown predicate or class {entry.key}")
    return LexiconTable(plans, class_nouns)
