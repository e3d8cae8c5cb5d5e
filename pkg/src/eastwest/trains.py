"""Domain model for trains and a reader/writer for their ground-fact encoding.

A train is a labeled, ordered list of cars.  The on-disk encoding is the
ground Prolog fact format used by the East-West train files::

    eastbound([c(1, rectangle, short, not_double, none, 2, l(circle, 1)), ...]).

Only this fact grammar is understood; any other clause in the input is
skipped so raw challenge files load unmodified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

CAR_SHAPES = ("rectangle", "hexagon", "ellipse", "u_shaped", "bucket")
LENGTHS = ("long", "short")
WALLS = ("double", "not_double")
ROOFS = ("none", "flat", "jagged", "peaked", "arc")
LOAD_SHAPES = ("circle", "hexagon", "rectangle", "triangle", "diamond", "utriangle")
AXLES = (2, 3)

EAST = "east"
WEST = "west"
LABELS = (EAST, WEST)


class TrainFormatError(ValueError):
    """Raised for syntax errors or invariant violations in train input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Car:
    position: int
    shape: str
    length: str
    walls: str
    roof: str
    axles: int
    load_shape: str
    load_count: int

    def __post_init__(self):
        if self.position < 1:
            raise TrainFormatError(f"car position must be >= 1, got {self.position}")
        if self.shape not in CAR_SHAPES:
            raise TrainFormatError(f"unknown car shape {self.shape!r}")
        if self.length not in LENGTHS:
            raise TrainFormatError(f"unknown car length {self.length!r}")
        if self.walls not in WALLS:
            raise TrainFormatError(f"unknown wall kind {self.walls!r}")
        if self.roof not in ROOFS:
            raise TrainFormatError(f"unknown roof kind {self.roof!r}")
        if self.axles not in AXLES:
            raise TrainFormatError(f"axles must be 2 or 3, got {self.axles}")
        if self.load_shape not in LOAD_SHAPES:
            raise TrainFormatError(f"unknown load shape {self.load_shape!r}")
        if not 0 <= self.load_count <= 3:
            raise TrainFormatError(f"load count must be in 0..3, got {self.load_count}")

    @property
    def is_open(self) -> bool:
        # open/closed is derived from the roof, never stored separately
        return self.roof == "none"

    @property
    def is_closed(self) -> bool:
        return self.roof != "none"


@dataclass(frozen=True)
class Train:
    id: str
    label: str
    cars: tuple[Car, ...]

    def __post_init__(self):
        if self.label not in LABELS:
            raise TrainFormatError(f"label must be 'east' or 'west', got {self.label!r}")
        if not self.cars:
            raise TrainFormatError("a train must have at least one car")
        positions = [c.position for c in self.cars]
        if positions != list(range(1, len(self.cars) + 1)):
            raise TrainFormatError(
                f"car positions must be exactly 1..{len(self.cars)} in order, got {positions}"
            )

    def __len__(self) -> int:
        return len(self.cars)


# --- ground-term tokenizer / parser ---------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<neck>:-)
      | (?P<int>\d+)
      | (?P<atom>[a-z][A-Za-z0-9_]*)
      | (?P<var>[A-Z_][A-Za-z0-9_]*)
      | (?P<punct>[()\[\],.])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    line, col = 1, 1
    pos = 0
    tokens = []
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise TrainFormatError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            if kind == "punct":
                kind = text
            tokens.append((kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else (None, "", 1, 1)
            raise TrainFormatError("unexpected end of input", last[2], last[3])
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise TrainFormatError(f"expected {kind!r}, found {tok[1]!r}", tok[2], tok[3])
        return tok

    def parse_term(self):
        """Ground term: integer, atom, or compound atom(arg, ...)."""
        tok = self.next()
        if tok[0] == "int":
            return int(tok[1]), tok
        if tok[0] != "atom":
            raise TrainFormatError(f"expected a ground term, found {tok[1]!r}", tok[2], tok[3])
        nxt = self.peek()
        if nxt is not None and nxt[0] == "(":
            self.next()
            args = [self.parse_term()[0]]
            while self.peek() is not None and self.peek()[0] == ",":
                self.next()
                args.append(self.parse_term()[0])
            self.expect(")")
            return (tok[1], tuple(args)), tok
        return tok[1], tok

    def skip_clause(self):
        """Skip tokens up to and including the next clause-terminating '.'."""
        while True:
            tok = self.next()
            if tok[0] == ".":
                return


def _car_from_term(term, tok) -> Car:
    line, col = tok[2], tok[3]
    if not (isinstance(term, tuple) and term[0] == "c"):
        raise TrainFormatError(f"expected a c/7 car term, found {term!r}", line, col)
    args = term[1]
    if len(args) != 7:
        raise TrainFormatError(f"car term has arity {len(args)}, expected 7", line, col)
    pos, shape, length, walls, roof, axles, load = args
    if not isinstance(pos, int):
        raise TrainFormatError(f"car position must be an integer, got {pos!r}", line, col)
    if not isinstance(axles, int):
        raise TrainFormatError(f"axle count must be an integer, got {axles!r}", line, col)
    if not (isinstance(load, tuple) and load[0] == "l"):
        raise TrainFormatError(f"expected an l/2 load term, found {load!r}", line, col)
    if len(load[1]) != 2:
        raise TrainFormatError(f"load term has arity {len(load[1])}, expected 2", line, col)
    load_shape, load_count = load[1]
    if not isinstance(load_count, int):
        raise TrainFormatError(f"load count must be an integer, got {load_count!r}", line, col)
    try:
        return Car(pos, shape, length, walls, roof, axles, load_shape, load_count)
    except TrainFormatError as exc:
        raise TrainFormatError(str(exc), line, col) from None


def parse_trains(source: str) -> list[Train]:
    """Parse eastbound/westbound facts into Train values, in file order.

    Unrelated clauses are skipped.  Ids are assigned east1.., west1.. per
    label in order of appearance.
    """
    parser = _Parser(_tokenize(source))
    trains: list[Train] = []
    counts = {EAST: 0, WEST: 0}
    while parser.peek() is not None:
        tok = parser.peek()
        if tok[0] == "atom" and tok[1] in ("eastbound", "westbound"):
            head = parser.next()
            nxt = parser.peek()
            if nxt is None or nxt[0] != "(":
                # a bare atom or something else; not a train fact
                parser.skip_clause()
                continue
            label = EAST if head[1] == "eastbound" else WEST
            parser.expect("(")
            parser.expect("[")
            cars = []
            term, ttok = parser.parse_term()
            cars.append(_car_from_term(term, ttok))
            while parser.peek() is not None and parser.peek()[0] == ",":
                parser.next()
                term, ttok = parser.parse_term()
                cars.append(_car_from_term(term, ttok))
            parser.expect("]")
            parser.expect(")")
            parser.expect(".")
            counts[label] += 1
            train_id = f"{label}{counts[label]}"
            try:
                trains.append(Train(train_id, label, tuple(cars)))
            except TrainFormatError as exc:
                raise TrainFormatError(f"{train_id}: {exc}", head[2], head[3]) from None
        else:
            parser.next()
            if tok[0] != ".":
                parser.skip_clause()
    return trains


def render_car(car: Car) -> str:
    return (
        f"c({car.position}, {car.shape}, {car.length}, {car.walls}, "
        f"{car.roof}, {car.axles}, l({car.load_shape}, {car.load_count}))"
    )


def render_train(train: Train) -> str:
    """Render a train as a ground fact; parse_trains round-trips it."""
    functor = "eastbound" if train.label == EAST else "westbound"
    pad = " " * (len(functor) + 2)
    body = (",\n" + pad).join(render_car(c) for c in train.cars)
    return f"{functor}([{body}]).\n"


def render_trains(trains: list[Train]) -> str:
    return "\n".join(render_train(t) for t in trains)


def load_trains(path) -> list[Train]:
    with open(path, encoding="utf-8") as fh:
        return parse_trains(fh.read())


def random_trains(count: int, seed: int, labels: bool = True) -> list[Train]:
    """Generate `count` random trains, 2-4 cars, uniform over car attributes.

    These are synthetic stand-ins for experiments; they are not the
    challenge trains.  Labels (when requested) are assigned uniformly at
    random and carry no hidden rule.
    """
    import numpy as np

    rng = np.random.default_rng(seed)
    trains = []
    counts = {EAST: 0, WEST: 0}
    for _ in range(count):
        n_cars = int(rng.integers(2, 5))
        cars = []
        for pos in range(1, n_cars + 1):
            cars.append(
                Car(
                    position=pos,
                    shape=CAR_SHAPES[rng.integers(len(CAR_SHAPES))],
                    length=LENGTHS[rng.integers(len(LENGTHS))],
                    walls=WALLS[rng.integers(len(WALLS))],
                    roof=ROOFS[rng.integers(len(ROOFS))],
                    axles=AXLES[rng.integers(len(AXLES))],
                    load_shape=LOAD_SHAPES[rng.integers(len(LOAD_SHAPES))],
                    load_count=int(rng.integers(0, 4)),
                )
            )
        label = EAST if (not labels or rng.random() < 0.5) else WEST
        counts[label] += 1
        trains.append(Train(f"{label}{counts[label]}", label, tuple(cars)))
    return trains
