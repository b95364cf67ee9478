"""Replayable certificates for the escape and non-solubility arguments.

A subgroup is *spread out* when it lies in no Gₖ. Spread-out claims
quantify over every k, so each certificate here fixes one bound k and
carries an element beyond it, together with everything needed to rebuild
that element:

    EscapeCertificate      g·h·g⁻¹ (or g·h·g⁻¹·h⁻¹) with level m+1 > k
    SubnormalCertificate   h conjugated through a chain of normal closures
    DerivedCertificate     a depth-d commutator tree, result ∈ G^(d) (or
                           in the d-th derived subgroup of the normal
                           closure of a seed element) and ≠ id

Everything rests on one fact about central amalgams A *_B C: for h ∈ A \\ B
and g ∉ A, both g·h·g⁻¹ and g·h·g⁻¹·h⁻¹ lie outside A. Applied inside
G_{m+1} = G_m *_{B_m} H_{m+1} this pushes levels up by construction.
"""

import json
import random
from dataclasses import dataclass, field
from typing import Literal

from modules.amalgam_core import (
    FactorSystem,
    GroupElement,
    commutator,
    conjugate,
    element_of_level,
    eq,
    in_base_element,
    is_identity,
    random_element,
    reduce,
    syllable_element,
)
from modules.errors import (
    IdentityInput,
    PreconditionViolated,
    RetryExhausted,
    VerificationFailed,
)
from modules.parsers import format_element, parse_word

DEFAULT_RETRY_LIMIT = 8


@dataclass(frozen=True)
class EscapeCertificate:
    h: GroupElement
    m: int
    g: GroupElement
    result: GroupElement
    claimed_floor: int
    kind: Literal["conjugate", "commutator"] = "conjugate"
    # level written into a loaded certificate; verify compares it with the replay
    recorded_level: int | None = None


@dataclass(frozen=True)
class SubnormalCertificate:
    h: GroupElement
    depth: int
    claimed_floor: int
    steps: tuple[EscapeCertificate, ...]
    recorded_result: GroupElement | None = None
    recorded_level: int | None = None

    @property
    def result(self) -> GroupElement:
        return self.steps[-1].result


@dataclass(frozen=True)
class Leaf:
    element: GroupElement
    # set when the leaf is conjugator·seed·conjugator⁻¹
    conjugator: GroupElement | None = None


@dataclass(frozen=True)
class Node:
    left: "Leaf | Node"
    right: "Leaf | Node"


CommutatorTree = Leaf | Node


@dataclass(frozen=True)
class DerivedCertificate:
    depth: int
    tree: CommutatorTree
    result: GroupElement
    claimed_floor: int
    seed_element: GroupElement | None = None
    retries: int = 0
    recorded_level: int | None = None


@dataclass
class Lemma21Report:
    samples: int
    failures: int
    seed: int
    instance: dict
    examples: list[str] = field(default_factory=list)


Certificate = EscapeCertificate | SubnormalCertificate | DerivedCertificate


# ─── Conjugate escape ────────────────────────────────────────────


def lemma21_check(
    h: GroupElement, g: GroupElement, m: int, sys: FactorSystem
) -> tuple[int, int]:
    """Levels of g·h·g⁻¹ and g·h·g⁻¹·h⁻¹; both are m+1 when the hypotheses hold."""
    if h.level > m:
        raise PreconditionViolated(
            f"level(h) = {h.level} > m = {m}", hypothesis="h in G_m"
        )
    if in_base_element(h, m, sys):
        raise PreconditionViolated(
            f"h = {format_element(h, sys)} lies in B_{m}", hypothesis="h not in B_m"
        )
    if g.level != m + 1:
        raise PreconditionViolated(
            f"level(g) = {g.level} != m+1 = {m + 1}", hypothesis="g in G_(m+1) minus G_m"
        )
    conj = conjugate(g, h, sys)
    comm = commutator(g, h, sys)
    return conj.level, comm.level


def _escape_floor(h: GroupElement, k: int, sys: FactorSystem) -> int:
    """Least m ≥ max(k, level(h)) with h ∉ B_m."""
    m = max(k, h.level)
    if h.level == 0:
        m = max(m, sys.base_escape_level(h.cf.value))
    return m


def _escape(h: GroupElement, k: int, sys: FactorSystem, kind: str) -> EscapeCertificate:
    if is_identity(h, sys):
        raise IdentityInput("escape witnesses need h != identity")
    m = _escape_floor(h, k, sys)
    g = syllable_element(m + 1, sys.escape_elem(m), sys)
    result = conjugate(g, h, sys) if kind == "conjugate" else commutator(g, h, sys)
    return EscapeCertificate(h=h, m=m, g=g, result=result, claimed_floor=k, kind=kind)


def escape_witness(h: GroupElement, k: int, sys: FactorSystem) -> EscapeCertificate:
    """A conjugate of h (so an element of its normal closure) outside G_k."""
    return _escape(h, k, sys, "conjugate")


def commutator_witness(h: GroupElement, k: int, sys: FactorSystem) -> EscapeCertificate:
    """g·h·g⁻¹·h⁻¹ outside G_k, an element of the commutator subgroup."""
    return _escape(h, k, sys, "commutator")


def subnormal_witness(
    h: GroupElement, depth: int, k: int, sys: FactorSystem
) -> SubnormalCertificate:
    """Element of S_depth outside G_k, where S₀ = G and S_i = ncl_{S_{i−1}}(h).

    Step 1 conjugates h by an escape letter. Step i conjugates h by the
    result of step i−1, which lies in S_{i−1}; the level of that conjugator
    fixes m for the next application of the amalgam lemma.
    """
    if depth < 1:
        raise PreconditionViolated("subnormal depth must be >= 1", hypothesis="depth >= 1")
    if is_identity(h, sys):
        raise IdentityInput("subnormal witnesses need h != identity")
    m0 = _escape_floor(h, k, sys)
    steps = [escape_witness(h, m0, sys)]
    for _ in range(depth - 1):
        g = steps[-1].result
        m = g.level - 1
        steps.append(
            EscapeCertificate(h=h, m=m, g=g, result=conjugate(g, h, sys), claimed_floor=m0)
        )
    last = steps[-1]
    steps[-1] = EscapeCertificate(
        h=h, m=last.m, g=last.g, result=last.result, claimed_floor=k, kind=last.kind
    )
    return SubnormalCertificate(h=h, depth=depth, claimed_floor=k, steps=tuple(steps))


# ─── Derived series ──────────────────────────────────────────────


def _leaf(L: int, seed_element: GroupElement | None, sys: FactorSystem) -> Leaf:
    """Leaf with level ≥ L (exactly L for unseeded trees)."""
    if seed_element is not None:
        cert = escape_witness(seed_element, L, sys)
        return Leaf(cert.result, conjugator=cert.g)
    if L == 0:
        return Leaf(syllable_element(0, sys.nonbase_elem(0), sys))
    return Leaf(syllable_element(L, sys.escape_elem(L - 1), sys))


class _Built:
    """Tree under construction with its evaluated element cached."""

    def __init__(self, tree: CommutatorTree, value: GroupElement):
        self.tree = tree
        self.value = value


def _deep(j: int, L: int, seed_element, sys: FactorSystem) -> _Built | None:
    if j == 0:
        leaf = _leaf(L, seed_element, sys)
        return _Built(leaf, leaf.element)
    x = _deep(j - 1, L, seed_element, sys)
    if x is None:
        return None
    g = _deep(j - 1, x.value.level + 1, seed_element, sys)
    if g is None:
        return None
    m = g.value.level - 1
    if x.value.level > m or in_base_element(x.value, m, sys):
        return None
    value = commutator(g.value, x.value, sys)
    return _Built(Node(g.tree, x.tree), value)


def derived_escape(
    d: int,
    k: int,
    sys: FactorSystem,
    seed_element: GroupElement | None = None,
    retry_limit: int = DEFAULT_RETRY_LIMIT,
) -> DerivedCertificate:
    """Non-identity element of the d-th derived subgroup with level > k.

    Unseeded leaves are single escape letters and each commutator level
    doubles the climb, so the starting level is max(0, k+1 − (2^d − 1)).
    Seeded leaves are conjugates of the seed, placing the result in the
    d-th derived subgroup of the seed's normal closure.
    """
    if d < 0:
        raise PreconditionViolated("depth must be >= 0", hypothesis="d >= 0")
    if seed_element is not None and is_identity(seed_element, sys):
        raise IdentityInput("the normal closure of the identity is trivial")
    L = max(0, k + 1 - (2 ** d - 1))
    for attempt in range(retry_limit + 1):
        built = _deep(d, L, seed_element, sys)
        if built is not None and built.value.level > k and not is_identity(built.value, sys):
            return DerivedCertificate(
                depth=d,
                tree=built.tree,
                result=built.value,
                claimed_floor=k,
                seed_element=seed_element,
                retries=attempt,
            )
        L += 1
    raise RetryExhausted(
        f"no depth-{d} witness above level {k} after {retry_limit} retries; "
        f"the instance likely violates its contract"
    )


def evaluate_tree(tree: CommutatorTree, sys: FactorSystem) -> GroupElement:
    if isinstance(tree, Leaf):
        return tree.element
    return commutator(evaluate_tree(tree.left, sys), evaluate_tree(tree.right, sys), sys)


def _uniform_depth(tree: CommutatorTree) -> int | None:
    if isinstance(tree, Leaf):
        return 0
    a, b = _uniform_depth(tree.left), _uniform_depth(tree.right)
    if a is None or a != b:
        return None
    return a + 1


def _leaves(tree: CommutatorTree):
    if isinstance(tree, Leaf):
        yield tree
    else:
        yield from _leaves(tree.left)
        yield from _leaves(tree.right)


# ─── Verification ────────────────────────────────────────────────


def _recorded_level_holds(cert: Certificate) -> bool:
    return cert.recorded_level is None or cert.recorded_level == cert.result.level


def _verify_escape(cert: EscapeCertificate, sys: FactorSystem) -> bool:
    h, g, m = cert.h, cert.g, cert.m
    if is_identity(h, sys) or h.level > m or in_base_element(h, m, sys):
        return False
    if g.level != m + 1:
        return False
    if cert.kind == "conjugate":
        replay = conjugate(g, h, sys)
    elif cert.kind == "commutator":
        replay = commutator(g, h, sys)
    else:
        return False
    return (
        eq(replay, cert.result)
        and cert.result.level == m + 1
        and cert.result.level > cert.claimed_floor
        and _recorded_level_holds(cert)
    )


def _verify_subnormal(cert: SubnormalCertificate, sys: FactorSystem) -> bool:
    if cert.depth < 1 or len(cert.steps) != cert.depth:
        return False
    for i, step in enumerate(cert.steps):
        if step.kind != "conjugate" or not eq(step.h, cert.h):
            return False
        if i > 0 and not eq(step.g, cert.steps[i - 1].result):
            return False
        if not _verify_escape(step, sys):
            return False
    if cert.recorded_result is not None and not eq(cert.recorded_result, cert.result):
        return False
    return cert.steps[-1].claimed_floor == cert.claimed_floor and _recorded_level_holds(cert)


def _verify_derived(cert: DerivedCertificate, sys: FactorSystem) -> bool:
    if _uniform_depth(cert.tree) != cert.depth:
        return False
    if cert.seed_element is not None:
        if is_identity(cert.seed_element, sys):
            return False
        for leaf in _leaves(cert.tree):
            if leaf.conjugator is None:
                return False
            if not eq(conjugate(leaf.conjugator, cert.seed_element, sys), leaf.element):
                return False
    value = evaluate_tree(cert.tree, sys)
    return (
        eq(value, cert.result)
        and not is_identity(value, sys)
        and value.level > cert.claimed_floor
        and _recorded_level_holds(cert)
    )


def verify(cert: Certificate, sys: FactorSystem) -> bool:
    """Replay a certificate from its inputs and re-check every invariant."""
    try:
        if isinstance(cert, EscapeCertificate):
            return _verify_escape(cert, sys)
        if isinstance(cert, SubnormalCertificate):
            return _verify_subnormal(cert, sys)
        if isinstance(cert, DerivedCertificate):
            return _verify_derived(cert, sys)
    except Exception:
        return False
    return False


# ─── Batched escape checks ──────────────────────────────────────


def lemma21_batch(
    sys: FactorSystem,
    samples: int,
    seed: int,
    max_level: int = 6,
    max_length: int = 16,
) -> Lemma21Report:
    """Random preconditioned (h, g, m); counts samples where either level ≠ m+1."""
    rng = random.Random(seed)
    failures: list[str] = []
    for _ in range(samples):
        m = rng.randint(0, max_level - 1)
        h = random_element(sys, rng, m, max_length)
        while is_identity(h, sys) or in_base_element(h, m, sys):
            h = random_element(sys, rng, m, max_length)
        g = element_of_level(sys, rng, m + 1, max_length)
        lvl_conj, lvl_comm = lemma21_check(h, g, m, sys)
        if lvl_conj != m + 1 or lvl_comm != m + 1:
            failures.append(
                f"m={m} h={format_element(h, sys)} g={format_element(g, sys)} "
                f"-> ({lvl_conj}, {lvl_comm})"
            )
    return Lemma21Report(
        samples=samples,
        failures=len(failures),
        seed=seed,
        instance=sys.describe(),
        examples=failures[:5],
    )


# ─── JSON codec ──────────────────────────────────────────────────


def _element_json(g: GroupElement, sys: FactorSystem) -> dict:
    return {"word": format_element(g, sys), "level": g.level}


def _element_from(data: dict | str, sys: FactorSystem) -> GroupElement:
    word = data["word"] if isinstance(data, dict) else data
    return reduce(parse_word(word, sys), sys)


def _level_from(data: dict | str) -> int | None:
    """Recorded level of an element entry; bare word strings record none."""
    return int(data["level"]) if isinstance(data, dict) and "level" in data else None


def _escape_json(cert: EscapeCertificate, sys: FactorSystem) -> dict:
    return {
        "kind": cert.kind,
        "inputs": {"h": format_element(cert.h, sys), "g": format_element(cert.g, sys)},
        "m": cert.m,
        "k": cert.claimed_floor,
        "result": _element_json(cert.result, sys),
    }


def _tree_json(tree: CommutatorTree, sys: FactorSystem) -> dict:
    if isinstance(tree, Leaf):
        out = {"leaf": format_element(tree.element, sys)}
        if tree.conjugator is not None:
            out["conjugator"] = format_element(tree.conjugator, sys)
        return out
    return {"commutator": [_tree_json(tree.left, sys), _tree_json(tree.right, sys)]}


def _tree_from(data: dict, sys: FactorSystem) -> CommutatorTree:
    if "leaf" in data:
        conj = data.get("conjugator")
        return Leaf(
            _element_from(data["leaf"], sys),
            _element_from(conj, sys) if conj is not None else None,
        )
    left, right = data["commutator"]
    return Node(_tree_from(left, sys), _tree_from(right, sys))


def certificate_to_json(cert: Certificate, sys: FactorSystem, seed: int | None = None) -> dict:
    info = sys.describe()
    header = {"instance": info["kind"], "prime": info["prime"]}
    if "exponent" in info:
        header["exponent"] = info["exponent"]
    if isinstance(cert, EscapeCertificate):
        body = {"type": "escape", **header, **_escape_json(cert, sys)}
    elif isinstance(cert, SubnormalCertificate):
        body = {
            "type": "subnormal",
            **header,
            "inputs": {"h": format_element(cert.h, sys)},
            "d": cert.depth,
            "k": cert.claimed_floor,
            "steps": [_escape_json(step, sys) for step in cert.steps],
            "result": _element_json(cert.result, sys),
        }
    else:
        inputs = {"tree": _tree_json(cert.tree, sys)}
        if cert.seed_element is not None:
            inputs["within"] = format_element(cert.seed_element, sys)
        body = {
            "type": "derived",
            **header,
            "inputs": inputs,
            "d": cert.depth,
            "k": cert.claimed_floor,
            "retries": cert.retries,
            "result": _element_json(cert.result, sys),
        }
    body["seed"] = seed
    return body


def _escape_from(data: dict, sys: FactorSystem) -> EscapeCertificate:
    return EscapeCertificate(
        h=_element_from(data["inputs"]["h"], sys),
        m=int(data["m"]),
        g=_element_from(data["inputs"]["g"], sys),
        result=_element_from(data["result"], sys),
        claimed_floor=int(data["k"]),
        kind=data.get("kind", "conjugate"),
        recorded_level=_level_from(data["result"]),
    )


def certificate_from_json(data: dict, sys: FactorSystem) -> Certificate:
    """Inverse of certificate_to_json; raises VerificationFailed on schema errors."""
    if not isinstance(data, dict):
        raise VerificationFailed(f"certificate must be a JSON object, got {type(data).__name__}")
    try:
        kind = data["type"]
        if kind == "escape":
            return _escape_from(data, sys)
        if kind == "subnormal":
            steps = []
            for step in data["steps"]:
                step = {**step, "inputs": {**step["inputs"], "h": data["inputs"]["h"]}}
                steps.append(_escape_from(step, sys))
            return SubnormalCertificate(
                h=_element_from(data["inputs"]["h"], sys),
                depth=int(data["d"]),
                claimed_floor=int(data["k"]),
                steps=tuple(steps),
                recorded_result=_element_from(data["result"], sys) if "result" in data else None,
                recorded_level=_level_from(data.get("result", "")),
            )
        if kind == "derived":
            within = data["inputs"].get("within")
            return DerivedCertificate(
                depth=int(data["d"]),
                tree=_tree_from(data["inputs"]["tree"], sys),
                result=_element_from(data["result"], sys),
                claimed_floor=int(data["k"]),
                seed_element=_element_from(within, sys) if within is not None else None,
                retries=int(data.get("retries", 0)),
                recorded_level=_level_from(data["result"]),
            )
    except (AttributeError, KeyError, TypeError, ValueError) as e:
        raise VerificationFailed(f"malformed certificate: {e}") from e
    raise VerificationFailed(f"unknown certificate type {data.get('type')!r}")


def dump_certificate(cert: Certificate, sys: FactorSystem, seed: int | None = None) -> str:
    return json.dumps(certificate_to_json(cert, sys, seed), indent=2)


def load_certificate(text: str, sys: FactorSystem) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise VerificationFailed(f"certificate is not valid JSON: {e}") from e
    return certificate_from_json(data, sys)
