"""Smoke test for the swiss_cheese extension module.

Build and install it first:

    pip install --no-build-isolation -e crates/py
"""

import cmath
import json
import math

import swiss_cheese as sc


def main():
    # h_N and g_n
    assert sc.eval_hn(2, 0j) == 1
    assert abs(sc.eval_hn(2, 1j * math.sqrt(2)) - 1 / 3) < 1e-15
    try:
        sc.eval_hn(4, 1j)
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("pole not reported")
    assert sc.eval_gn(3, 0j) == 1
    assert sc.select_start_index(1.0) == 4
    assert sc.select_start_index(0.1) == 22

    discs = sc.admissible_discs(9)
    assert all(d.radius == 0.5 for d, _ in discs)
    assert sum(k == "corner" for _, k in discs) == 4

    # quadrature against residues
    p = 0.3 + 0.2j
    value, err, _ = sc.contour_integral(sc.Rational.identity(), sc.Rational.simple_pole(p))
    assert abs(value - 2j * math.pi) < 1e-10 and err <= 1e-10
    f = sc.Rational.from_poles([1, 2j], [0.1 - 0.4j])
    g = sc.Rational.from_poles([1], [-0.5 + 0.5j, 2.5])
    value, _, _ = sc.contour_integral(f, g, 1e-11)
    assert abs(value - sc.residue_oracle(f, g)) < 1e-9
    rows = sc.check_residue_oracle(20, 1)
    assert all(r["verdict"] == "pass" for r in rows), rows

    # a configuration with both layers
    cfg = sc.build(4 * math.pi, l=32, levels=3, per_level=2, seed=5)
    assert abs(cfg.c0 - 1) < 1e-15
    cfg.validate()
    again = sc.Config.from_json(cfg.to_json())
    assert again.to_json() == cfg.to_json()
    led = cfg.ledger()
    assert led["combined_boundary_sum"] < cfg.c / 2 + 2 * math.pi * cfg.c0
    assert all(r["verdict"] == "pass" for r in sc.check_budget(cfg))

    disc, kind, _, _ = cfg.deletions()[0]
    assert kind == "wermer" and cfg.is_deleted(disc.center)
    norm, _ = sc.sup_norm(sc.Rational.simple_pole(disc.center), cfg, 1024)
    assert norm <= 1 / disc.radius * (1 + 1e-12)
    derivation = sc.check_derivation(cfg)
    assert all(r["verdict"] == "pass" for r in derivation), derivation
    assert abs(derivation[0]["measured"] - 2 * math.pi) < 1e-9

    w = sc.witness(cfg, 0j, [0.9 + 0j])
    assert w["separates"] and math.isfinite(w["ln_lower_at_z0"])
    svg = cfg.render_svg()
    assert svg.count("<circle") == len(cfg)

    level = sc.check_level_family(3, 256)
    failing = [r["check"] for r in level if r["verdict"] == "fail"]
    assert failing == ["level.outer"], failing
    assert sc.parse_complex("1.5e-3-2i") == complex(1.5e-3, -2)
    print(json.dumps({"ok": True, "deletions": len(cfg), "witness_index": w["l"]}))


if __name__ == "__main__":
    main()
