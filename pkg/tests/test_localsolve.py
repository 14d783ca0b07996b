"""p-adic solubility of y^2 = U(x): solver vs. an exact-integer recursion."""

import copy
import random
import time

import pytest

from densdeg import localsolve as ls
from densdeg.polyarith import poly, valuation

# ---------------------------------------------------------------------------
# oracle: divide Z_p into residue discs and decide each one with exact
# integers.  A disc is decided once the value's valuation is stable across
# it; a Newton-dominant point certifies a Z_p-root (hence a y = 0 point).


def _eval(c, x):
    return sum(ci * x**i for i, ci in enumerate(c))


def _deval(c, x):
    return sum(i * ci * x ** (i - 1) for i, ci in enumerate(c) if i)


def _disc(c, p, a, k, cap):
    w = _eval(c, a)
    if w == 0:
        return True
    v = valuation(w, p)
    if v < k:
        return v % 2 == 0 and pow(w // p**v % p, (p - 1) // 2, p) == 1
    dw = _deval(c, a)
    if dw != 0 and v > 2 * valuation(dw, p):
        return True
    if k > cap:
        return None
    out = False
    for b in range(p):
        r = _disc(c, p, a + b * p**k, k + 1, cap)
        if r is True:
            return True
        if r is None:
            out = None
    return out


def oracle_qp_soluble(ints, p, cap=9):
    """True / False / None for odd p, by exhausting residue discs."""
    ints = list(ints) + [0] * (7 - len(ints))
    results = []
    for a in range(p):
        results.append(_disc(ints, p, a, 1, cap))
        if results[-1] is True:
            return True
    results.append(_disc(list(reversed(ints)), p, 0, 1, cap))  # |x| > 1 chart
    if results[-1] is True:
        return True
    return False if all(r is False for r in results) else None


def test_solver_matches_disc_oracle():
    rng = random.Random(515)
    decided = 0
    t0 = time.time()
    for _ in range(150):
        ints = [rng.randint(-20, 20) for _ in range(6)] + [rng.choice([1, -1, 2, 3, -2])]
        U = poly(*ints)
        if U.degree < 5:
            continue
        p = rng.choice([3, 5, 7])
        want = oracle_qp_soluble(U.integer_coeffs(), p)
        got, cert = ls.has_local_points(U, ls.LocalField(p))
        assert ls.verify_certificate(cert)
        assert got is not None, (ints, p)
        if want is not None:
            assert got == want, (ints, p)
            decided += 1
    assert decided >= 100  # the oracle must carry real weight
    assert time.time() - t0 < 60


@pytest.mark.parametrize(
    "coeffs,p,want",
    [
        ((1, 0, 1, 0, 0, 0, 1), 3, True),  # U(0) = 1
        ((-1, 0, -1, 0, -1, 0, -1), 3, False),  # values and lc all -1 mod 3
        ((-1, 0, -1, 0, -1, 0, -1), 2, False),
        ((-17, 0, 1), 2, True),  # x = 9, y = 8
        ((2, 0, 0, 0, 0, 0, 2), 2, True),  # x = 1, y = 2
        ((3, 0, -3, 0, 0, 0, 3), 5, False),
        ((1, 2, 0, 0, 0, 1), 7, True),  # odd degree: branch point at infinity
    ],
)
def test_frozen_solubility(coeffs, p, want):
    got, cert = ls.has_local_points(poly(*coeffs), ls.LocalField(p))
    assert got is want
    assert ls.verify_certificate(cert)


def test_odd_degree_short_circuit():
    got, cert = ls.has_local_points(poly(4, 0, 0, 0, 0, 1), ls.LocalField(3))
    assert got is True and cert.payload["reason"] == "odd-degree"


def test_insufficient_precision_is_inconclusive():
    got, cert = ls.has_local_points(poly(1, 1, 1, 1, 1, 1, 1), ls.LocalField(3, N=0))
    assert got is None
    assert cert.payload["reason"] == "insufficient-precision"


def test_curve_input_uses_completed_square():
    from densdeg.curvemodel import HyperellipticCurve

    H = HyperellipticCurve(poly(2, 3, 1, 1, 0, -1), poly(1, 0, 0, 1))
    got, cert = ls.has_local_points(H, ls.LocalField(5))
    direct, _ = ls.has_local_points(H.u_poly(), ls.LocalField(5))
    assert got == direct
    assert cert.payload["poly"] == [int(c) for c in H.u_poly().integer_coeffs()]


# ---------------------------------------------------------------------------
# quadratic completions


def test_quadratic_twist_fields_odd():
    fields = ls.quadratic_twist_fields(3)
    assert len(fields) == 4  # trivial, unramified, two ramified
    assert {K.e for K in fields} == {1, 2}
    js = [K.to_json() for K in fields]
    assert len({str(j) for j in js}) == 4
    for K, j in zip(fields, js):
        assert ls.LocalField.from_json(j).to_json() == j


def test_quadratic_twist_fields_two_out_of_scope():
    with pytest.raises(ValueError):
        ls.quadratic_twist_fields(2)


def test_smallest_nonresidue():
    assert ls.smallest_nonresidue(3) == 2
    assert ls.smallest_nonresidue(5) == 2
    assert ls.smallest_nonresidue(7) == 3
    assert ls.smallest_nonresidue(23) == 5
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29):
        n = ls.smallest_nonresidue(p)
        assert pow(n, (p - 1) // 2, p) == p - 1


def test_quadratic_obstruction_frozen_pair():
    a = poly(3, 0, -3, 0, 0, 0, 3)
    b = poly(-1, 0, 1, 0, 0, 0, -1)
    obs, cert = ls.quadratic_obstruction(a, b, 3)
    assert obs is True
    assert ls.verify_certificate(cert)
    # a curve with points everywhere kills the obstruction
    obs2, cert2 = ls.quadratic_obstruction(a, poly(1, 0, 0, 0, 0, 0, 1), 3)
    assert obs2 is False
    assert ls.verify_certificate(cert2)


def test_quadratic_obstruction_is_symmetric():
    a = poly(3, 0, -3, 0, 0, 0, 3)
    b = poly(-1, 0, 1, 0, 0, 0, -1)
    r1, _ = ls.quadratic_obstruction(a, b, 3)
    r2, _ = ls.quadratic_obstruction(b, a, 3)
    assert r1 == r2 is True


# ---------------------------------------------------------------------------
# degree divisibility reports


def test_degree_divisibility_frozen():
    statuses, cert = ls.degree_divisibility(poly(3, 0, -3, 0, 0, 0, 3), 3, 2)
    assert statuses == {1: "impossible", 2: "possible"}
    assert ls.verify_certificate(cert)


def test_degree_divisibility_pointed_curve():
    statuses, cert = ls.degree_divisibility(poly(1, 4, 10, 10, 5, 2, 1), 11, 3)
    assert statuses[1] == "possible"  # rational points exist, locally too
    assert ls.verify_certificate(cert)


def test_degree_divisibility_keys():
    statuses, _ = ls.degree_divisibility(poly(3, 0, -3, 0, 0, 0, 3), 3, 4)
    assert sorted(statuses) == [1, 2, 3, 4]
    assert set(statuses.values()) <= {"possible", "impossible", "unknown"}


# ---------------------------------------------------------------------------
# mod-3 surface emptiness


def test_surface_qp_empty_mod3():
    f = poly(-1, 0, -1, 0, -1, 0, -1)
    g = poly(-2, 0, -2, 0, -2, 0, -2)
    empty, cert = ls.surface_qp_empty_mod3(f, g)
    assert empty is True
    assert ls.verify_certificate(cert)
    # the check is class-specific: f in the -1 class, g in the +1 class
    with pytest.raises(ls.CertificateError):
        ls.surface_qp_empty_mod3(f, f)
    with pytest.raises(ls.CertificateError):
        ls.surface_qp_empty_mod3(poly(1, 1), g)


# ---------------------------------------------------------------------------
# certificates are real objects: round-trip, and tampering is detected


def fresh_cert():
    _, cert = ls.has_local_points(poly(1, 1, 1, 1, 1, 1, 1), ls.LocalField(3))
    return cert


def test_certificate_round_trip():
    cert = fresh_cert()
    j = cert.to_json()
    back = ls.LocalCertificate.from_json(j)
    assert back.kind == cert.kind and back.to_json() == j
    assert ls.verify_certificate(j) and ls.verify_certificate(back)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda j: j["payload"].__setitem__("conclusion", False),
        lambda j: j["payload"]["poly"].__setitem__(0, 2),
        lambda j: j["payload"]["witness"].__setitem__("kind", "unknown-kind"),
        lambda j: j.__setitem__("kind", "quadratic-obstruction"),
    ],
)
def test_certificate_tampering_detected(mutate):
    j = copy.deepcopy(fresh_cert().to_json())
    mutate(j)
    with pytest.raises((ls.CertificateError, KeyError, TypeError)):
        if not ls.verify_certificate(j):
            raise ls.CertificateError("rejected")


def test_negative_certificate_is_checkable():
    got, cert = ls.has_local_points(poly(-1, 0, -1, 0, -1, 0, -1), ls.LocalField(3))
    assert got is False
    j = copy.deepcopy(cert.to_json())
    assert ls.verify_certificate(j)
    # deleting a residue branch from the tree must break the covering check
    j["payload"]["charts"]["affine"]["branches"].pop()
    with pytest.raises(ls.CertificateError):
        ls.verify_certificate(j)
