# -*- coding: utf-8 -*-

from typing import Tuple

from .word import Letter, Word, UNIT, MAX_GENERATORS


class NoMatch(Exception):
    '''
        Thrown when parsing fails.
        Almost always caught and almost never fatal
    '''
    pass


class WordSyntaxError(ValueError):
    '''Thrown by `parse_word` when the text is not a word'''
    pass


WHITESPACE = " \t\r\n"


def static(string, i, static):
    j = i + len(static)
    if string[i:j] == static:
        return j
    raise NoMatch


def match_any_of(string, i, collection):
    for char in collection:
        try:
            return char, static(string, i, char)
        except NoMatch:
            pass
    raise NoMatch


def skip_whitespace(string: str, i: int) -> int:
    while i < len(string) and string[i] in WHITESPACE:
        i += 1
    return i


def match_index(string: str, i: int) -> Tuple[int, int]:
    # "0" on its own, so that "x0" reaches the range check below
    try:
        return 0, static(string, i, "0")
    except NoMatch:
        pass

    digit, j = match_any_of(string, i, "123456789")
    integer = int(digit)
    try:
        while True:
            digit, j = match_any_of(string, j, "0123456789")
            integer *= 10
            integer += int(digit)
    except NoMatch:
        return integer, j


def match_letter(string: str, i: int, max_gen: int = MAX_GENERATORS):
    j = static(string, i, "x")
    gen, j = match_index(string, j)
    if gen < 1 or gen > max_gen:
        raise WordSyntaxError(
            f"Generator index {gen} at index {i} of {repr(string)} "
            f"is outside 1..{max_gen}"
        )
    starred = False
    try:
        j = static(string, j, "*")
        starred = True
    except NoMatch:
        pass

    # tokens are whitespace-separated
    if j < len(string) and string[j] not in WHITESPACE:
        raise NoMatch
    return Letter(gen, starred), j


def match_word(string: str, i: int, max_gen: int = MAX_GENERATORS):
    i = skip_whitespace(string, i)

    # "1" is the unit word, and only ever stands alone
    try:
        j = static(string, i, "1")
        j = skip_whitespace(string, j)
        if j == len(string):
            return UNIT, j
    except NoMatch:
        pass

    letters = list()
    try:
        while True:
            letter, i = match_letter(string, i, max_gen)
            letters.append(letter)
            i = skip_whitespace(string, i)
    except NoMatch:
        pass
    return Word(letters), i


def parse_word(string: str, max_gen: int = MAX_GENERATORS) -> Word:
    '''
        Parse a full string such as "x1 x2* x1" and return a `Word`. Fail if
        the whole string wasn't parsed, or if it was empty
    '''
    word, i = match_word(string, 0, max_gen)
    if i != len(string) or (len(word) == 0 and "1" not in string):
        raise WordSyntaxError(
            f"Could not parse {repr(string)} beyond index {str(i)}"
        )
    return word
