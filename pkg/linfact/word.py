# -*- coding: utf-8 -*-

'''
    Letters and words in free unitary generators. A `Word` is a monomial in
    the free *-monoid: no relation such as x1 x1* = 1 is ever applied here.
'''

from dataclasses import dataclass
from typing import Iterable, Tuple

# The parser rejects larger generator indices unless given its own `max_gen`
MAX_GENERATORS = 16


@dataclass(frozen=True)
class Letter:
    '''A generator x_j, or its adjoint x_j* when `starred` is set'''
    gen: int
    starred: bool = False

    def __post_init__(self):
        if not isinstance(self.gen, int) or self.gen < 1:
            raise ValueError(f"Invalid generator index: {repr(self.gen)}")

    def __repr__(self):
        return f"Letter({repr(self.gen)}, {repr(self.starred)})"

    def __str__(self):
        return f"x{self.gen}" + ("*" if self.starred else "")

    def adjoint(self):
        return Letter(self.gen, not self.starred)

    def key(self):
        # x_j sorts before x_j*, smaller index first
        return (self.gen, self.starred)

    def __lt__(self, other):
        return self.key() < other.key()


@dataclass(frozen=True)
class Word:
    '''
        A finite sequence of `Letter`s. The empty word is the unit 1. Words
        compare in graded lexicographic order: shorter words first, then
        letter by letter.
    '''
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for letter in self.letters:
            if not isinstance(letter, Letter):
                raise ValueError(f"Not a letter: {repr(letter)}")

    @classmethod
    def of(cls, *letters: Letter):
        return cls(letters)

    def __repr__(self):
        args = ", ".join(repr(letter) for letter in self.letters)
        return f"Word.of({args})"

    def __str__(self):
        return format_word(self)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other):
        '''Free concatenation'''
        return Word(self.letters + other.letters)

    def adjoint(self):
        '''(l1 ... ld)* = ld* ... l1*'''
        return Word(tuple(
            letter.adjoint() for letter in reversed(self.letters)
        ))

    def degree(self):
        return len(self.letters)

    def generators(self):
        return frozenset(letter.gen for letter in self.letters)

    def key(self):
        return (
            len(self.letters),
            tuple(letter.key() for letter in self.letters),
        )

    def __lt__(self, other):
        return self.key() < other.key()

    def __le__(self, other):
        return self.key() <= other.key()


UNIT = Word()


def format_word(word: Word) -> str:
    '''Whitespace-separated tokens; the unit word prints as "1"'''
    if len(word) == 0:
        return "1"
    return " ".join(str(letter) for letter in word.letters)


def canonical(words: Iterable[Word]):
    return sorted(words, key=Word.key)
