"""Deterministic oracle Turing machines with explicit resource clocks.

A machine reads its input from a two-way read-only tape, works on a two-way
read-write storage tape, and appends bits to a write-only oracle tape.  On
entering QUE the oracle tape is decoded as a structure encoding; the next
state is YES exactly when that structure satisfies the oracle sentence, the
tape is erased, and nothing else happens.  Exceeding any resource bound is a
rejection, never an error, so every decoded description is a total decider.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

from .aristotelian import MalformedCode, decode_nat, decode_str, encode_nat, encode_str
from .core import Structure, Vocabulary, NoIntegerUniverse, decode_bin, encode_bin, enumerate_structures
from .logic import Formula
from .semantics import EvalConfig, models

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = ("L", "R", "S")
APPENDS = ("", "0", "1")
RESERVED = ("ACC", "QUE", "YES", "NO")
POLYTIME = "polytime"
LOGSPACE = "logspace"

_STATE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

TransKey = tuple[str, str, str]
TransVal = tuple[str, str, str, str, str]


class MachineError(ValueError):
    pass


class MalformedMachine(ValueError):
    pass


@dataclass(frozen=True)
class OracleMachine:
    states: tuple[str, ...]
    start: str
    kind: str
    clock_c: int
    step_c: int
    transitions: tuple[tuple[TransKey, TransVal], ...]

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise MachineError("duplicate state names")
        for state in self.states:
            if not _STATE_RE.match(state):
                raise MachineError(f"bad state name {state!r}")
        missing = [s for s in RESERVED if s not in self.states]
        if missing:
            raise MachineError(f"reserved states missing: {missing}")
        if self.start not in self.states:
            raise MachineError(f"start state {self.start!r} not declared")
        if self.kind not in (POLYTIME, LOGSPACE):
            raise MachineError(f"kind must be polytime or logspace, got {self.kind!r}")
        if self.clock_c < 1 or self.step_c < 1:
            raise MachineError("resource exponents must be >= 1")
        keys = [key for key, _ in self.transitions]
        if keys != sorted(keys):
            raise MachineError("transitions must be sorted by key")
        if len(set(keys)) != len(keys):
            raise MachineError("transition table must be deterministic")
        for (state, in_sym, sto_sym), (nxt, write, in_mv, sto_mv, app) in self.transitions:
            if state in ("ACC", "QUE"):
                raise MachineError(f"{state} admits no outgoing transitions")
            if state not in self.states or nxt not in self.states:
                raise MachineError(f"transition references unknown state")
            if in_sym not in SYMBOLS or sto_sym not in SYMBOLS or write not in SYMBOLS:
                raise MachineError(f"bad tape symbol in transition from {state}")
            if in_mv not in MOVES or sto_mv not in MOVES:
                raise MachineError(f"bad head move in transition from {state}")
            if app not in APPENDS:
                raise MachineError(f"bad oracle append in transition from {state}")

    @classmethod
    def make(cls, states, start, kind, clock_c, step_c, transitions) -> "OracleMachine":
        table = tuple(sorted((tuple(k), tuple(v)) for k, v in dict(transitions).items()))
        return cls(tuple(states), start, kind, clock_c, step_c, table)

    @cached_property
    def delta(self) -> dict[TransKey, TransVal]:
        return dict(self.transitions)

    def step_limit(self, input_len: int) -> int:
        limit = (input_len + 2) ** self.step_c
        if self.kind == POLYTIME:
            limit = min(limit, (input_len + 2) ** self.clock_c)
        return limit

    def space_limit(self, input_len: int) -> int | None:
        if self.kind == LOGSPACE:
            return math.floor(self.clock_c * math.log2(input_len + 2))
        return None


_SYM_CODE = {sym: format(i, "02b") for i, sym in enumerate(SYMBOLS)}
_MOVE_CODE = {mv: format(i, "02b") for i, mv in enumerate(MOVES)}
_APP_CODE = {app: format(i, "02b") for i, app in enumerate(APPENDS)}


def encode_tm(m: OracleMachine) -> str:
    index = {state: i for i, state in enumerate(m.states)}
    out = [encode_nat(len(m.states))]
    out.extend(encode_str(s) for s in m.states)
    out.append(encode_nat(index[m.start]))
    out.append("0" if m.kind == POLYTIME else "1")
    out.append(encode_nat(m.clock_c))
    out.append(encode_nat(m.step_c))
    out.append(encode_nat(len(m.transitions)))
    for (state, in_sym, sto_sym), (nxt, write, in_mv, sto_mv, app) in m.transitions:
        out.append(encode_nat(index[state]))
        out.append(_SYM_CODE[in_sym])
        out.append(_SYM_CODE[sto_sym])
        out.append(encode_nat(index[nxt]))
        out.append(_SYM_CODE[write])
        out.append(_MOVE_CODE[in_mv])
        out.append(_MOVE_CODE[sto_mv])
        out.append(_APP_CODE[app])
    return "".join(out)


class _TmDecoder:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def nat(self) -> int:
        value, used = decode_nat(self.bits, self.pos)
        self.pos += used
        return value

    def string(self) -> str:
        s, used = decode_str(self.bits, self.pos)
        self.pos += used
        return s

    def pair_bits(self, table) -> str:
        if self.pos + 2 > len(self.bits):
            raise MalformedCode("truncated field")
        code = self.bits[self.pos : self.pos + 2]
        self.pos += 2
        for value, encoded in table.items():
            if encoded == code:
                return value
        raise MalformedCode(f"invalid field code {code}")


def decode_tm(bits: str) -> OracleMachine:
    if not bits or any(b not in "01" for b in bits):
        raise MalformedMachine("machine code must be a nonempty bit string")
    d = _TmDecoder(bits)
    try:
        n_states = d.nat()
        states = tuple(d.string() for _ in range(n_states))
        start_idx = d.nat()
        if d.pos >= len(bits):
            raise MalformedCode("truncated kind bit")
        kind = POLYTIME if bits[d.pos] == "0" else LOGSPACE
        d.pos += 1
        clock_c = d.nat()
        step_c = d.nat()
        n_trans = d.nat()
        transitions = []
        for _ in range(n_trans):
            state_idx = d.nat()
            in_sym = d.pair_bits(_SYM_CODE)
            sto_sym = d.pair_bits(_SYM_CODE)
            next_idx = d.nat()
            write = d.pair_bits(_SYM_CODE)
            in_mv = d.pair_bits(_MOVE_CODE)
            sto_mv = d.pair_bits(_MOVE_CODE)
            app = d.pair_bits(_APP_CODE)
            if state_idx >= n_states or next_idx >= n_states:
                raise MalformedCode("transition state index out of range")
            transitions.append(
                ((states[state_idx], in_sym, sto_sym),
                 (states[next_idx], write, in_mv, sto_mv, app))
            )
    except MalformedCode as exc:
        raise MalformedMachine(str(exc)) from exc
    if d.pos != len(bits):
        raise MalformedMachine(f"{len(bits) - d.pos} trailing bits after the machine")
    if start_idx >= n_states:
        raise MalformedMachine("start state index out of range")
    try:
        return OracleMachine(states, states[start_idx], kind, clock_c, step_c,
                             tuple(transitions))
    except MachineError as exc:
        raise MalformedMachine(str(exc)) from exc


def run(m: OracleMachine, input_bits: str, oracle_sentence: Formula,
        oracle_vocab: Vocabulary, max_steps: int | None = None,
        config: EvalConfig | None = None) -> bool:
    """Simulate on the given input; True means the machine halted in ACC.

    Resource bounds come from the machine's own clocks; max_steps can only
    tighten them.  Oracle strings that encode no structure answer NO.
    """
    if any(b not in "01" for b in input_bits):
        raise MachineError("machine input must be a bit string")
    limit = m.step_limit(len(input_bits))
    if max_steps is not None:
        limit = min(limit, max_steps)
    space_cap = m.space_limit(len(input_bits))
    delta = m.delta

    state = m.start
    in_head = 0
    storage: dict[int, str] = {}
    sto_head = 0
    visited = {0}
    oracle: list[str] = []
    steps = 0
    while True:
        if state == "ACC":
            return True
        if steps >= limit:
            return False
        if state == "QUE":
            query = "".join(oracle)
            try:
                b = decode_bin(oracle_vocab, query)
                answer = models(b, oracle_sentence, config)
            except NoIntegerUniverse:
                answer = False
            oracle.clear()
            assert not oracle
            state = "YES" if answer else "NO"
            steps += 1
            continue
        in_sym = input_bits[in_head] if 0 <= in_head < len(input_bits) else BLANK
        sto_sym = storage.get(sto_head, BLANK)
        action = delta.get((state, in_sym, sto_sym))
        if action is None:
            return False
        state, write, in_mv, sto_mv, app = action
        storage[sto_head] = write
        if in_mv == "L":
            in_head -= 1
        elif in_mv == "R":
            in_head += 1
        if sto_mv == "L":
            sto_head -= 1
        elif sto_mv == "R":
            sto_head += 1
        visited.add(sto_head)
        if space_cap is not None and len(visited) > space_cap:
            return False
        if app:
            oracle.append(app)
        steps += 1


def is_reduction_upto(m: OracleMachine, gamma: Formula, target: Formula,
                      vocab: Vocabulary, n_max: int,
                      config: EvalConfig | None = None) -> Structure | None:
    """First structure where accepting the encoding differs from satisfying
    the target sentence, or None when the reduction condition holds up to n_max."""
    for b in enumerate_structures(vocab, n_max):
        accepted = run(m, encode_bin(b), gamma, vocab, config=config)
        if accepted != models(b, target, config):
            return b
    return None


def identity_machine(kind: str = POLYTIME, clock_c: int = 2,
                     step_c: int = 2) -> OracleMachine:
    """Copy the input to the oracle tape, query, accept exactly on YES."""
    transitions = {
        ("q0", "0", BLANK): ("q0", BLANK, "R", "S", "0"),
        ("q0", "1", BLANK): ("q0", BLANK, "R", "S", "1"),
        ("q0", BLANK, BLANK): ("QUE", BLANK, "S", "S", ""),
        ("YES", BLANK, BLANK): ("ACC", BLANK, "S", "S", ""),
    }
    return OracleMachine.make(
        ("q0",) + RESERVED, "q0", kind, clock_c, step_c, transitions
    )


def always_accept_machine(kind: str = POLYTIME) -> OracleMachine:
    return OracleMachine.make(RESERVED, "ACC", kind, 1, 1, {})


def always_reject_machine(kind: str = POLYTIME) -> OracleMachine:
    return OracleMachine.make(RESERVED, "NO", kind, 1, 1, {})


# --- text format ---------------------------------------------------------


def format_machine(m: OracleMachine) -> str:
    lines = [
        f"kind {m.kind}",
        f"clock {m.clock_c}",
        f"step {m.step_c}",
        f"start {m.start}",
        "states " + " ".join(m.states),
    ]
    for (state, in_sym, sto_sym), (nxt, write, in_mv, sto_mv, app) in m.transitions:
        lines.append(
            f"{state} {in_sym} {sto_sym} -> {nxt} {write} {in_mv} {sto_mv} {app or '-'}"
        )
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> OracleMachine:
    kind = clock_c = step_c = start = None
    states: tuple[str, ...] = ()
    transitions = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "kind":
            kind = parts[1]
        elif parts[0] == "clock":
            clock_c = int(parts[1])
        elif parts[0] == "step":
            step_c = int(parts[1])
        elif parts[0] == "start":
            start = parts[1]
        elif parts[0] == "states":
            states = tuple(parts[1:])
        else:
            if len(parts) != 9 or parts[3] != "->":
                raise MachineError(f"bad transition line {raw!r}")
            state, in_sym, sto_sym = parts[0], parts[1], parts[2]
            nxt, write, in_mv, sto_mv, app = parts[4:9]
            transitions[(state, in_sym, sto_sym)] = (
                nxt, write, in_mv, sto_mv, "" if app == "-" else app
            )
    if None in (kind, clock_c, step_c, start) or not states:
        raise MachineError("machine text needs kind, clock, step, start, states")
    return OracleMachine.make(states, start, kind, clock_c, step_c, transitions)
