"""Shared machinery for the issuing protocols: parties, transcripts, registry.

A protocol run is a fixed script of numbered steps.  Each step that sends
something becomes one Message in the transcript; each trusted-computation
step additionally appends one IdealRecord that names the functionality and
who received output, and nothing else (inputs and outputs never hit the log).
Replaying a run with the same seed reproduces the transcript byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from ..groups import Element, GElem, GtElem, Scalar, element_encoding

ROLES = ("TI", "KGC", "AA", "CA", "A", "KA", "CSP", "CS", "DS", "DU", "DO")

MODELS = ("hur1", "hur2", "wang", "lin", "secured")


class ProtocolError(Exception):
    """Base class for protocol-run errors."""


class MissingInput(ProtocolError):
    """A required private input or leaked value is absent."""


class DivisionByZero(ProtocolError):
    """A derived divisor turned out to be 0; the run aborts."""


class UnassignedAttribute(ProtocolError):
    """Requested attribute is not in the attribute registry."""


class BadConfig(ProtocolError):
    """Scenario or model configuration is inconsistent."""


class MissingState(ProtocolError):
    """An operation needs a party state that was not supplied."""


class ModelMismatch(ProtocolError):
    """Party states or key material come from a different model or setup."""


@dataclass(frozen=True)
class PartyId:
    role: str
    label: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")

    def __str__(self) -> str:
        return self.label


# Broadcast pseudo-receiver for setup announcements.
EVERYONE = PartyId("DO", "*")


@dataclass
class Message:
    seq: int
    sender: PartyId
    receiver: PartyId
    step: str
    payload: dict[str, Element]

    def to_record(self) -> dict:
        return {
            "seq": self.seq,
            "from": self.sender.label,
            "to": self.receiver.label,
            "step": self.step,
            "payload": {name: element_encoding(v) for name, v in self.payload.items()},
        }


@dataclass
class IdealRecord:
    seq: int
    ideal: str
    outputs_to: tuple[str, ...]

    def to_record(self) -> dict:
        return {"seq": self.seq, "ideal": self.ideal, "outputs_to": list(self.outputs_to)}


@dataclass
class Transcript:
    model: str
    seed: int | None = None
    records: list[Union[Message, IdealRecord]] = field(default_factory=list)
    final_outputs: dict[str, dict[str, Element]] = field(default_factory=dict)

    @property
    def messages(self) -> list[Message]:
        return [r for r in self.records if isinstance(r, Message)]

    @property
    def ideal_records(self) -> list[IdealRecord]:
        return [r for r in self.records if isinstance(r, IdealRecord)]

    def _next_seq(self) -> int:
        return len(self.records) + 1

    def send(self, sender: PartyId, receiver: PartyId, step: str,
             payload: dict[str, Element] | None = None) -> Message:
        msg = Message(self._next_seq(), sender, receiver, step, dict(payload or {}))
        self.records.append(msg)
        return msg

    def invoke_ideal(self, ideal: str, outputs_to: tuple[str, ...]) -> IdealRecord:
        rec = IdealRecord(self._next_seq(), ideal, outputs_to)
        self.records.append(rec)
        return rec

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.to_record(), separators=(",", ":")) for r in self.records]
        return "\n".join(lines) + "\n" if lines else ""


@dataclass
class PartyState:
    """One party's view: master secrets, published elements, per-run values.

    ``run`` holds the working values of the most recent key issuance (the
    chosen blinding exponents and any elements the party received), which is
    exactly the knowledge a colluding party can contribute to an attack.
    """

    party: PartyId
    model: str
    secrets: dict[str, Scalar] = field(default_factory=dict)
    public: dict[str, Element] = field(default_factory=dict)
    run: dict[str, object] = field(default_factory=dict)
    registry: "AttributeRegistry | None" = None


@dataclass(frozen=True)
class RegistryEntry:
    authority: int = 1      # index of the managing attribute authority
    weight: int = 1         # per-attribute weight (weighted-key model)
    h_index: int | None = None  # index of the public h element, when used


@dataclass
class AttributeRegistry:
    entries: dict[str, RegistryEntry] = field(default_factory=dict)

    def require(self, attribute: str) -> RegistryEntry:
        try:
            return self.entries[attribute]
        except KeyError:
            raise UnassignedAttribute(f"attribute {attribute!r} is not in the registry") from None

    def authority_of(self, attribute: str) -> int:
        return self.require(attribute).authority

    def weight_of(self, attribute: str) -> int:
        return self.require(attribute).weight

    def attributes_of(self, authority: int, attrs) -> list[str]:
        """The subset of attrs managed by the given authority, sorted."""
        return sorted(a for a in attrs if self.require(a).authority == authority)

    @classmethod
    def uniform(cls, attributes, weight: int = 1, authorities: int = 1) -> "AttributeRegistry":
        """Round-robin assignment over authorities, constant weight."""
        names = sorted(attributes)
        return cls({
            name: RegistryEntry(authority=(i % authorities) + 1, weight=weight, h_index=i + 1)
            for i, name in enumerate(names)
        })


@dataclass
class ModelConfig:
    registry: AttributeRegistry
    m: int = 1  # number of attribute authorities (multi-authority model only)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise BadConfig("authority count must be >= 1")
