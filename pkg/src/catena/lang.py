"""Tokenizer and evaluator for a minimal concatenative stack language.

A program is a flat token sequence.  Integer literals push themselves,
``[`` ... ``]`` captures the enclosed tokens as a quotation value, and
every other token names a word: either a built-in primitive or a user
definition that expands inline.  Concatenating two programs therefore
composes the functions they denote, which is the property the rest of
the workbench is built on.

Machines are immutable; evaluation returns a new machine, so identical
inputs always yield identical results.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateName,
    LangError,
    MalformedDefinition,
    StackOverflow,
    StackUnderflow,
    TypeMismatch,
    UnbalancedBracket,
    UnknownWord,
)

Token = str

OPEN, CLOSE = "[", "]"
DEFINE, END_DEFINE = ":", ";"

_INT = re.compile(r"-?\d+\Z")
_TOKEN = re.compile(r"\[|\]|[^\s\[\]]+")


@dataclass(frozen=True)
class Quotation:
    """A captured token sequence, pushed to the stack as a value."""

    tokens: tuple[Token, ...]

    def __repr__(self):
        return f"Quotation({render_value(self)!r})"


Value = "int | Quotation"


@dataclass(frozen=True)
class WordDef:
    """Entry of the word table.

    ``body`` is None for built-ins, otherwise the token sequence the
    word expands to.  ``effect`` is the declared (consumed, produced)
    stack effect; it is None for combinators, whose effect depends on
    the quotations they consume.
    """

    name: str
    body: tuple[Token, ...] | None = None
    builtin: str | None = None
    effect: tuple[int, int] | None = None
    combinator: bool = False


def _primitive(name: str, effect: tuple[int, int] | None, combinator: bool = False) -> WordDef:
    return WordDef(name=name, builtin=name, effect=effect, combinator=combinator)


#: Built-in vocabulary: integer literals and brackets are handled by the
#: evaluator itself; everything else a program may use starts here.
BUILTINS: dict[str, WordDef] = {
    "id": _primitive("id", (0, 0)),
    "dup": _primitive("dup", (1, 2)),
    "swap": _primitive("swap", (2, 2)),
    "pop": _primitive("pop", (1, 0)),
    "+": _primitive("+", (2, 1)),
    "*": _primitive("*", (2, 1)),
    "map": _primitive("map", None, combinator=True),
    "apply": _primitive("apply", None, combinator=True),
}


@dataclass(frozen=True)
class Machine:
    """Evaluation context: stack, word table, and the two finiteness knobs.

    With ``modulus`` m set, every integer on the stack stays in [0, m).
    With ``cap`` set, any push beyond that depth raises StackOverflow.
    """

    stack: tuple = ()
    words: Mapping[str, WordDef] = field(default_factory=lambda: dict(BUILTINS))
    modulus: int | None = None
    cap: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.cap is not None and self.cap < 1:
            raise ValueError("cap must be at least 1")
        if self.cap is not None and len(self.stack) > self.cap:
            raise ValueError("initial stack deeper than cap")


def tokenize(source: str) -> list[Token]:
    """Split source into tokens: maximal whitespace-free runs, except
    that ``[`` and ``]`` always stand alone."""
    return _TOKEN.findall(source)


def is_literal(token: Token) -> bool:
    return bool(_INT.match(token))


def render_value(value) -> str:
    if isinstance(value, Quotation):
        return OPEN + " ".join(value.tokens) + CLOSE
    return str(value)


def render_stack(stack: Sequence) -> str:
    """Bottom-first, space-separated rendering; empty stack renders empty."""
    return " ".join(render_value(v) for v in stack)


def value_tokens(value) -> tuple[Token, ...]:
    """Tokens that, when evaluated, push exactly this value."""
    if isinstance(value, Quotation):
        return (OPEN, *value.tokens, CLOSE)
    return (str(value),)


def _reduce(n: int, modulus: int | None) -> int:
    return n % modulus if modulus is not None else n


def _need(stack: list, n: int):
    if len(stack) < n:
        raise StackUnderflow(f"needs {n} value(s), stack has {len(stack)}")


def _push(stack: list, value, cap: int | None):
    if cap is not None and len(stack) >= cap:
        raise StackOverflow(f"push beyond depth {cap}")
    stack.append(value)


def _capture(work: deque) -> tuple[Token, ...]:
    """Consume tokens up to the bracket matching an already-read ``[``."""
    depth = 1
    tokens: list[Token] = []
    while work:
        tok, _ = work.popleft()
        if tok == OPEN:
            depth += 1
        elif tok == CLOSE:
            depth -= 1
            if depth == 0:
                return tuple(tokens)
        tokens.append(tok)
    raise UnbalancedBracket(f"unmatched {OPEN!r}")


def _quotation_values(quote: Quotation, modulus: int | None) -> list:
    """Read a quotation as a value list (literals and nested quotations)."""
    values = []
    work = deque((t, None) for t in quote.tokens)
    while work:
        tok, _ = work.popleft()
        if tok == OPEN:
            values.append(Quotation(_capture(work)))
        elif is_literal(tok):
            values.append(_reduce(int(tok), modulus))
        else:
            raise TypeMismatch(f"{tok!r} is not a value")
    return values


def _subrun(tokens: Iterable[Token], machine: Machine) -> Machine:
    # Failures inside a consumed quotation are reported at the combinator.
    try:
        return run(tokens, machine)
    except LangError as err:
        err.position = None
        raise


def _apply_builtin(name: str, stack: list, machine: Machine):
    cap, modulus = machine.cap, machine.modulus
    if name == "id":
        return
    if name == "dup":
        _need(stack, 1)
        _push(stack, stack[-1], cap)
    elif name == "swap":
        _need(stack, 2)
        stack[-1], stack[-2] = stack[-2], stack[-1]
    elif name == "pop":
        _need(stack, 1)
        stack.pop()
    elif name in ("+", "*"):
        _need(stack, 2)
        if not isinstance(stack[-1], int) or not isinstance(stack[-2], int):
            raise TypeMismatch(f"{name!r} expects two integers")
        y, x = stack.pop(), stack.pop()
        stack.append(_reduce(x + y if name == "+" else x * y, modulus))
    elif name == "apply":
        _need(stack, 1)
        if not isinstance(stack[-1], Quotation):
            raise TypeMismatch("apply expects a quotation")
        code = stack.pop()
        result = _subrun(code.tokens, replace(machine, stack=tuple(stack)))
        stack[:] = result.stack
    elif name == "map":
        _need(stack, 2)
        if not isinstance(stack[-1], Quotation) or not isinstance(stack[-2], Quotation):
            raise TypeMismatch("map expects a value quotation below a code quotation")
        code = stack.pop()
        data = stack.pop()
        out: list[Token] = []
        for element in _quotation_values(data, modulus):
            scratch = _subrun(code.tokens, replace(machine, stack=(element,)))
            if len(scratch.stack) != 1:
                raise TypeMismatch("mapped code must leave exactly one value")
            out.extend(value_tokens(scratch.stack[0]))
        _push(stack, Quotation(tuple(out)), cap)
    else:  # pragma: no cover - table and dispatch are kept in sync
        raise UnknownWord(f"no primitive {name!r}")


def run(program: Iterable[Token], machine: Machine) -> Machine:
    """Evaluate tokens left to right and return the resulting machine.

    Raises StackUnderflow, StackOverflow, UnknownWord, UnbalancedBracket
    or TypeMismatch; the exception carries the index of the top-level
    token that failed.
    """
    stack = list(machine.stack)
    work: deque = deque((tok, i) for i, tok in enumerate(program))
    while work:
        tok, pos = work.popleft()
        try:
            if tok == OPEN:
                _push(stack, Quotation(_capture(work)), machine.cap)
            elif tok == CLOSE:
                raise UnbalancedBracket(f"unmatched {CLOSE!r}")
            elif is_literal(tok):
                _push(stack, _reduce(int(tok), machine.modulus), machine.cap)
            else:
                word = machine.words.get(tok)
                if word is None:
                    raise UnknownWord(f"undefined word {tok!r}")
                if word.builtin is not None:
                    _apply_builtin(word.builtin, stack, machine)
                else:
                    # Inline expansion: body tokens inherit the caller's position.
                    work.extendleft((t, pos) for t in reversed(word.body))
        except LangError as err:
            if err.position is None:
                err.position = pos
            raise
    return replace(machine, stack=tuple(stack))


def split_instructions(program: Sequence[Token]) -> list[tuple[int, list[Token]]]:
    """Chunk tokens into top-level instructions.

    A complete bracketed quotation counts as a single instruction; every
    other token is one instruction by itself.  Returns (start index,
    tokens) pairs.
    """
    chunks = []
    i, n = 0, len(program)
    while i < n:
        if program[i] == OPEN:
            depth, j = 1, i + 1
            while j < n and depth:
                if program[j] == OPEN:
                    depth += 1
                elif program[j] == CLOSE:
                    depth -= 1
                j += 1
            chunks.append((i, list(program[i:j])))
            i = j
        else:
            chunks.append((i, [program[i]]))
            i += 1
    return chunks


def trace(program: Sequence[Token], machine: Machine) -> list[tuple]:
    """Stack after each top-level instruction; last element equals the
    stack of run().  On failure the raised error carries the trace seen
    so far in ``partial_trace``."""
    states: list[tuple] = []
    current = machine
    for start, chunk in split_instructions(list(program)):
        try:
            current = run(chunk, current)
        except LangError as err:
            err.position = start + (err.position or 0)
            err.partial_trace = states
            raise
        states.append(current.stack)
    return states


def define_word(machine: Machine, definition_tokens: Sequence[Token]) -> Machine:
    """Extend the word table from a ``: name body ;`` definition.

    The body may only use words that are already defined, so expansion
    always terminates; redefinition is rejected.
    """
    tokens = list(definition_tokens)
    if len(tokens) < 3 or tokens[0] != DEFINE or tokens[-1] != END_DEFINE:
        raise MalformedDefinition("definition must have the shape ': name body ;'")
    name, body = tokens[1], tokens[2:-1]
    if name in (OPEN, CLOSE, DEFINE, END_DEFINE) or is_literal(name):
        raise MalformedDefinition(f"{name!r} cannot name a word")
    if DEFINE in body or END_DEFINE in body:
        raise MalformedDefinition("definitions do not nest")
    if name in machine.words:
        raise DuplicateName(f"{name!r} is already defined")
    depth = 0
    for t in body:
        if t == OPEN:
            depth += 1
        elif t == CLOSE:
            depth -= 1
            if depth < 0:
                raise MalformedDefinition("unbalanced brackets in body")
        elif not is_literal(t) and t not in machine.words:
            raise UnknownWord(f"body references undefined word {t!r}")
    if depth:
        raise MalformedDefinition("unbalanced brackets in body")
    words = dict(machine.words)
    words[name] = WordDef(name=name, body=tuple(body))
    return replace(machine, words=words)


def strip_comments(text: str) -> str:
    """Drop ``#`` line comments (the program-file convention)."""
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _segments(tokens: list[Token]) -> list[tuple[str, list[Token]]]:
    """Split a token stream into definition and code segments, in order.
    ``:`` starts a definition only outside quotation brackets."""
    segments: list[tuple[str, list[Token]]] = []
    code: list[Token] = []
    depth = 0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if depth == 0 and tok == DEFINE:
            if code:
                segments.append(("code", code))
                code = []
            j = i + 1
            while j < len(tokens) and tokens[j] != END_DEFINE:
                j += 1
            if j == len(tokens):
                raise MalformedDefinition(f"definition missing {END_DEFINE!r}")
            segments.append(("def", tokens[i:j + 1]))
            i = j + 1
            continue
        if tok == OPEN:
            depth += 1
        elif tok == CLOSE:
            depth = max(depth - 1, 0)
        code.append(tok)
        i += 1
    if code:
        segments.append(("code", code))
    return segments


def run_program(source: str, machine: Machine) -> Machine:
    """Evaluate program text: comments stripped, ``: ... ;`` definitions
    installed as they appear, everything else executed in order."""
    for kind, tokens in _segments(tokenize(strip_comments(source))):
        if kind == "def":
            machine = define_word(machine, tokens)
        else:
            machine = run(tokens, machine)
    return machine


def trace_program(source: str, machine: Machine) -> tuple[Machine, list[tuple]]:
    """Like run_program, but also collect the per-instruction stacks of
    the executed code segments."""
    steps: list[tuple] = []
    for kind, tokens in _segments(tokenize(strip_comments(source))):
        if kind == "def":
            machine = define_word(machine, tokens)
        else:
            states = trace(tokens, machine)
            steps.extend(states)
            if states:
                machine = replace(machine, stack=states[-1])
    return machine, steps
