"""Registry of splitting-scheme coefficients.

Coefficients of the six embedded eighth-order drift/kick schemes are stored
as 30-digit decimal strings and parsed once at import time.  Each half-list
omits its closure entry; the closure is always recomputed from the palindromic
consistency conditions, so the unfolded coefficient sums equal 1 by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import CoefficientParseError, InconsistentScheme, UnknownScheme

CONSISTENCY_TOL = 1e-14


class SchemeKind(Enum):
    ABA = "ABA"
    BAB = "BAB"
    SS_COMPOSITION = "SS"


class FlowKind(Enum):
    DRIFT_A = "A"
    KICK_B = "B"


@dataclass(frozen=True)
class SchemeMetadata:
    """Reported quality indicators (stored, never recomputed from series)."""

    effective_error: float | None = None
    delta_1norm: float | None = None
    delta_maxnorm: float | None = None


@dataclass(frozen=True)
class SchemeCoefficients:
    """Half-lists of a palindromic splitting scheme, closure included."""

    name: str
    kind: SchemeKind
    stages: int
    order: int
    a_half: tuple[float, ...]
    b_half: tuple[float, ...]
    gammas: tuple[float, ...] | None = None
    metadata: SchemeMetadata | None = None
    source: str = "embedded"


@dataclass(frozen=True)
class FlowSchedule:
    """Fully unfolded alternating drift/kick sequence, ready for stepping."""

    entries: tuple[tuple[FlowKind, float], ...]
    fsal_mergeable: bool
    stages: int  # number of KICK_B entries, the cost unit

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Embedded coefficient tables.
#
# Each entry lists only the independent (tabulated) coefficients; the closure
# value is computed in _complete_half.  30-digit strings keep full precision
# for extended-precision builds.
# ---------------------------------------------------------------------------

_EMBEDDED: dict[str, dict] = {
    "A17": {
        "kind": SchemeKind.ABA,
        "stages": 17,
        "order": 8,
        "a": (
            "0.0520924343840339006426037968353",
            "0.225287493267702165807274831864",
            "0.416276189612257117795363856737",
            "-0.384567270213950399652168569029",
            "0.0997271783470514816674547589369",
            "-0.108833834399100218757003157958",
            "0.222010736648991680848341975522",
            "0.523879522036734296002247438223",
        ),
        "b": (
            "0.145850304812644731608096609877",
            "0.255156544139293944162028807345",
            "0.0181334688208317251361460684041",
            "-0.179040110299264554587007062749",
            "-0.118470801433302245053382954342",
            "0.186461689273821083344937258279",
            "0.459041581767136840219244627361",
            "-0.003660836270318358975321459399",
        ),
        "metadata": SchemeMetadata(3.45, 8.42, 0.5459),
    },
    "A18": {
        "kind": SchemeKind.ABA,
        "stages": 18,
        "order": 8,
        "a": (
            "0.0866003822712445920135805954462",
            "-0.0231572735424388070228714693753",
            "0.191410576083774088999564416369",
            "0.378895558692931579545387584925",
            "-0.0467359566364556111599485526051",
            "-0.156198111997810415438979605642",
            "0.156025836895094823718831871041",
            "0.252844012473796333586850465807",
            "-0.640644212172254239866860564270",
        ),
        "b": (
            "-0.08",
            "0.209460550048243262121199483001",
            "0.274887805875735483503233064415",
            "-0.224214208870409561366168655624",
            "0.347657740563761656321390026010",
            "-0.168783183866211679175007668385",
            "0.144209344805460873709120777707",
            "0.0116851121360265483381405054244",
        ),
        "metadata": SchemeMetadata(3.65, 7.42, 0.6406),
    },
    "A19": {
        "kind": SchemeKind.ABA,
        "stages": 19,
        "order": 8,
        "a": (
            "0.0505805",
            "0.149999",
            "-0.0551795510771615573511026950361",
            "0.423755898835337951482264998051",
            "-0.213495353584659048059672194633",
            "-0.0680769774574032619111630736274",
            "0.227917056974013435948887201671",
            "-0.235373619381058906524740047732",
            "0.387413869179878047816794031058",
        ),
        "b": (
            "0.129478606560536730662493794395",
            "0.222257260092671143423043559581",
            "-0.0577514893325147204757023246320",
            "-0.0578312262103924910221345032763",
            "0.103087297437175356747933252265",
            "-0.140819612554090768205554103887",
            "0.0234462603492826276699713718626",
            "0.134854517356684096617882205068",
            "0.0287973821073779306345172160211",
        ),
        "metadata": SchemeMetadata(2.76, 5.98, 0.4237),
    },
    "B17": {
        "kind": SchemeKind.BAB,
        "stages": 17,
        "order": 8,
        "a": (
            "0.160227696073839513690970240076",
            "0.306354507436867319879440957100",
            "0.308395508895171191756544975556",
            "0.120362086566233408450063177659",
            "-0.622888687549183872072186218718",
            "0.635560951632990078378672016548",
            "-0.144226974795419229640437363913",
            "-0.284867527074173816678992817545",
        ),
        "b": (
            "0.0514196142537210073343152693459",
            "0.250497030318342871458417941091",
            "0.512412268300327350035492806653",
            "-0.231597138650894401279645184364",
            "0.116091323536875759881216298975",
            "-0.0098365173246965763985763034283",
            "-0.108032771466281638634277563747",
            "0.249039864198023642002940910070",
        ),
        "metadata": SchemeMetadata(2.80, 8.93, 0.6355),
    },
    "B18": {
        "kind": SchemeKind.BAB,
        "stages": 18,
        "order": 8,
        "a": (
            "0.144410089394373457971755553148",
            "0.911935520865154315536815857376",
            "-0.00072932909837392655161199996844",
            "-0.930317101800698721159455541447",
            "0.253804074671714046593439154323",
            "0.147948981530918626913598733391",
            "-0.448814759614614928125216243784",
            "0.0824123980794580106751237195418",
        ),
        "b": (
            "0.045",
            "0.459016679491512416807266107555",
            "-0.0456553445594333153223655352757",
            "0.0457031020401841003192648096559",
            "-0.216814341025322492810152535338",
            "0.163168264552484857133047358600",
            "-0.0857080319814376219389850039430",
            "0.0265745810650523466142922093591",
            "-0.0365538332992893220147096150675",
        ),
        "metadata": SchemeMetadata(3.44, 9.68, 0.9303),
    },
    "B19": {
        "kind": SchemeKind.BAB,
        "stages": 19,
        "order": 8,
        "a": (
            "0.337548675291317241942440116575",
            "-0.223647977575409990331768222380",
            "0.168949714872223740906385138015",
            "0.171179938816205886154783136334",
            "-0.349765168067292877221144631312",
            "0.523808861006312397712070357524",
            "-0.194208871063049124066394765282",
            "-0.323496751337931087309823477561",
            "0.322817287614899749216601693799",
        ),
        "b": (
            "0.036132460472136313416730168194",
            "0.012697863961074113381675193011",
            "0.201318391240629276109068041836",
            "0.135683350134504233201330671671",
            "-0.0579071833999963041504740663015",
            "-0.0772509501792649549463874931821",
            "-0.00264758266409925952822161203471",
            "-0.0329844384945603065320797537355",
            "0.0476781560950366927530646289755",
        ),
        "metadata": SchemeMetadata(3.41, 6.94, 0.5238),
    },
    "STRANG_ABA": {
        "kind": SchemeKind.ABA,
        "stages": 1,
        "order": 2,
        "a": (),
        "b": (),
        "metadata": SchemeMetadata(None, 2.0, 1.0),
    },
    "STRANG_BAB": {
        "kind": SchemeKind.BAB,
        "stages": 1,
        "order": 2,
        "a": (),
        "b": (),
        "metadata": SchemeMetadata(None, 2.0, 1.0),
    },
}

SCHEME_NAMES = tuple(_EMBEDDED)
EIGHTH_ORDER_NAMES = ("A17", "A18", "A19", "B17", "B18", "B19")


def _full_lengths(kind: SchemeKind, stages: int) -> tuple[int, int]:
    """Lengths of the unfolded (a, b) coefficient lists."""
    if kind is SchemeKind.ABA:
        return stages + 1, stages
    if kind is SchemeKind.BAB:
        return stages, stages + 1
    raise ValueError(f"no drift/kick unfolding for kind {kind}")


def _half_length(full_length: int) -> int:
    return (full_length + 1) // 2


def _complete_half(values: Sequence[float], full_length: int) -> tuple[float, ...]:
    """Append the closure coefficient to a half-list.

    The last half entry appears once in the palindrome when the full list has
    odd length (it is the center) and twice otherwise, which fixes it through
    the requirement that the unfolded coefficients sum to 1.
    """
    n = _half_length(full_length)
    vals = list(values)
    if len(vals) == n - 1:
        multiplicity = 1 if full_length % 2 else 2
        vals.append((1.0 - 2.0 * math.fsum(vals)) / multiplicity)
    elif len(vals) != n:
        raise CoefficientParseError(
            f"expected {n - 1} or {n} coefficients, got {len(vals)}"
        )
    return tuple(vals)


def _unfold_half(half: Sequence[float], full_length: int) -> list[float]:
    n = _half_length(full_length)
    return list(half) + list(reversed(half[: full_length - n]))


def _half_sum_check(half: Sequence[float], full_length: int, label: str) -> None:
    total = math.fsum(_unfold_half(half, full_length))
    if abs(total - 1.0) > CONSISTENCY_TOL:
        raise InconsistentScheme(
            f"unfolded {label}-coefficients sum to {total!r}, expected 1"
        )


def build_scheme(name: str) -> SchemeCoefficients:
    """Return an embedded scheme by name, closure coefficients included."""
    key = name.upper()
    try:
        spec = _EMBEDDED[key]
    except KeyError:
        raise UnknownScheme(name) from None
    kind, stages = spec["kind"], spec["stages"]
    la, lb = _full_lengths(kind, stages)
    a_half = _complete_half([float(s) for s in spec["a"]], la)
    b_half = _complete_half([float(s) for s in spec["b"]], lb)
    _half_sum_check(a_half, la, "a")
    _half_sum_check(b_half, lb, "b")
    return SchemeCoefficients(
        name=key,
        kind=kind,
        stages=stages,
        order=spec["order"],
        a_half=a_half,
        b_half=b_half,
        metadata=spec["metadata"],
    )


def labeled_entries(
    scheme: SchemeCoefficients,
) -> list[tuple[FlowKind, str, float]]:
    """Unfolded entries as (kind, symbol, coefficient), e.g. ('A', 'a9', c).

    Symbols refer to the 1-based half-list index, matching the compact
    palindromic notation of the coefficient tables.
    """
    if scheme.kind is SchemeKind.SS_COMPOSITION:
        raise InconsistentScheme("SS compositions have no drift/kick unfolding")
    la, lb = _full_lengths(scheme.kind, scheme.stages)
    _half_sum_check(scheme.a_half, la, "a")
    _half_sum_check(scheme.b_half, lb, "b")

    def indices(half_len_full: int) -> list[int]:
        n = _half_length(half_len_full)
        return list(range(1, n + 1)) + list(range(half_len_full - n, 0, -1))

    a_full = _unfold_half(scheme.a_half, la)
    b_full = _unfold_half(scheme.b_half, lb)
    a_idx = indices(la)
    b_idx = indices(lb)
    a_entries = [
        (FlowKind.DRIFT_A, f"a{i}", c) for i, c in zip(a_idx, a_full)
    ]
    b_entries = [(FlowKind.KICK_B, f"b{i}", c) for i, c in zip(b_idx, b_full)]
    out: list[tuple[FlowKind, str, float]] = []
    first, second = (a_entries, b_entries) if scheme.kind is SchemeKind.ABA else (
        b_entries,
        a_entries,
    )
    for i in range(len(second)):
        out.append(first[i])
        out.append(second[i])
    out.append(first[-1])
    return out


def _merge_adjacent(
    entries: Iterable[tuple[FlowKind, float]]
) -> list[tuple[FlowKind, float]]:
    merged: list[tuple[FlowKind, float]] = []
    for kind, coeff in entries:
        if merged and merged[-1][0] is kind:
            merged[-1] = (kind, merged[-1][1] + coeff)
        else:
            merged.append((kind, coeff))
    return merged


def unfold(scheme: SchemeCoefficients) -> FlowSchedule:
    """Produce the full palindromic alternating flow sequence of a scheme."""
    entries = _merge_adjacent(
        (kind, coeff) for kind, _, coeff in labeled_entries(scheme)
    )
    stages = sum(1 for kind, _ in entries if kind is FlowKind.KICK_B)
    return FlowSchedule(
        entries=tuple(entries),
        fsal_mergeable=entries[0][0] is entries[-1][0],
        stages=stages,
    )


def coefficient_norms(scheme: SchemeCoefficients) -> tuple[float, float]:
    """(1-norm, max-norm) of the full unfolded coefficient vector."""
    coeffs = [abs(c) for _, _, c in labeled_entries(scheme)]
    return math.fsum(coeffs), max(coeffs)


def delta_argmax(scheme: SchemeCoefficients) -> str:
    """Symbol attaining the coefficient max-norm (first in unfolded order)."""
    entries = labeled_entries(scheme)
    best = max(entries, key=lambda e: abs(e[2]))
    for _, symbol, coeff in entries:
        if abs(coeff) == abs(best[2]):
            return symbol
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# External coefficient files.
#
# Line-oriented UTF-8 text: `kind ABA|BAB|SS`, `order N`, `stages N`, then
# `a <decimal>` / `b <decimal>` / `gamma <decimal>` lines in index order.
# `name <string>` is optional, `#` starts a comment.  Closure entries may be
# omitted (they are recomputed); fully specified lists are validated instead.
# ---------------------------------------------------------------------------

def load_external(path) -> SchemeCoefficients:
    """Parse, closure-complete and validate a coefficient file."""
    kind: SchemeKind | None = None
    order = stages = None
    name = None
    a_vals: list[float] = []
    b_vals: list[float] = []
    gammas: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise CoefficientParseError(f"{path}:{lineno}: malformed line {raw!r}")
            key, value = parts[0].lower(), parts[1].strip()
            try:
                if key == "kind":
                    kind = SchemeKind(value.upper())
                elif key == "order":
                    order = int(value)
                elif key == "stages":
                    stages = int(value)
                elif key == "name":
                    name = value
                elif key == "a":
                    a_vals.append(float(value))
                elif key == "b":
                    b_vals.append(float(value))
                elif key == "gamma":
                    gammas.append(float(value))
                else:
                    raise CoefficientParseError(
                        f"{path}:{lineno}: unknown key {key!r}"
                    )
            except (ValueError, KeyError) as exc:
                if isinstance(exc, CoefficientParseError):
                    raise
                raise CoefficientParseError(f"{path}:{lineno}: {exc}") from exc
    if kind is None or order is None or stages is None:
        raise CoefficientParseError(f"{path}: kind, order and stages are required")
    source = str(path)
    if kind is SchemeKind.SS_COMPOSITION:
        if a_vals or b_vals:
            raise CoefficientParseError(f"{path}: SS files take gamma lines only")
        g = _complete_half(gammas, stages)
        _half_sum_check(g, stages, "gamma")
        return SchemeCoefficients(
            name=name or f"SS{stages}",
            kind=kind,
            stages=stages,
            order=order,
            a_half=(),
            b_half=(),
            gammas=g,
            metadata=None,
            source=source,
        )
    la, lb = _full_lengths(kind, stages)
    a_half = _complete_half(a_vals, la)
    b_half = _complete_half(b_vals, lb)
    _half_sum_check(a_half, la, "a")
    _half_sum_check(b_half, lb, "b")
    return SchemeCoefficients(
        name=name or f"{kind.value}{stages}",
        kind=kind,
        stages=stages,
        order=order,
        a_half=a_half,
        b_half=b_half,
        metadata=None,
        source=source,
    )


def encode(scheme: SchemeCoefficients) -> str:
    """Serialize a scheme in the external file format (closure omitted)."""
    lines = [
        f"name {scheme.name}",
        f"kind {scheme.kind.value}",
        f"order {scheme.order}",
        f"stages {scheme.stages}",
    ]
    if scheme.kind is SchemeKind.SS_COMPOSITION:
        assert scheme.gammas is not None
        for g in scheme.gammas[:-1]:
            lines.append(f"gamma {g!r}")
    else:
        for a in scheme.a_half[:-1]:
            lines.append(f"a {a!r}")
        for b in scheme.b_half[:-1]:
            lines.append(f"b {b!r}")
    return "\n".join(lines) + "\n"


def ss_composition(
    gammas: Sequence[float], name: str = "SS", order: int = 2
) -> SchemeCoefficients:
    """Build an SS-composition scheme from palindromic kernel weights."""
    g = tuple(float(x) for x in gammas)
    m = len(g)
    if g != tuple(reversed(g)):
        raise InconsistentScheme("SS weights must be palindromic")
    if abs(math.fsum(g) - 1.0) > CONSISTENCY_TOL:
        raise InconsistentScheme("SS weights must sum to 1")
    n = _half_length(m)
    return SchemeCoefficients(
        name=name,
        kind=SchemeKind.SS_COMPOSITION,
        stages=m,
        order=order,
        a_half=(),
        b_half=(),
        gammas=g[:n],
    )


def ss_gammas_full(scheme: SchemeCoefficients) -> tuple[float, ...]:
    """Full palindromic gamma sequence of an SS composition."""
    if scheme.kind is not SchemeKind.SS_COMPOSITION or scheme.gammas is None:
        raise InconsistentScheme(f"{scheme.name} is not an SS composition")
    return tuple(_unfold_half(scheme.gammas, scheme.stages))
