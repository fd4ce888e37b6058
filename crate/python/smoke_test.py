"""Smoke test for the complexkit Python extension.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import math
import pathlib

import complexkit as ck

ROOT = pathlib.Path(__file__).resolve().parent.parent


def life():
    life = ck.RuleSet("B3/S23")
    glider = ck.Grid([(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)])
    assert ck.classify(glider, life) == "spaceship p=4 d=(1,1)"
    assert ck.classify(ck.Grid([(0, 0), (1, 0), (2, 0)]), life) == "oscillator p=2"
    history = ck.run(glider, life, 4)
    assert len(history) == 5
    assert history[-1] == glider.translate(1, 1)

    text = ck.encode_pattern(glider)
    assert text == "x = 3, y = 3, rule = B3/S23\nbo$2bo$3o!"
    back, rule = ck.decode_pattern(text)
    assert back == glider and str(rule) == "B3/S23"
    assert ck.encode_pattern(glider, "plaintext") == ".O.\n..O\nOOO\n"

    gun = (ROOT / "crates/core/tests/fixtures/gosper_gun.rle").read_text()
    assert ck.decode_pattern(gun)[0].population == 36

    try:
        ck.RuleSet("B9/S")
    except ValueError as e:
        assert "9" in str(e)
    else:
        raise AssertionError("bad rule accepted")


def complexity():
    assert all(ck.info_bits(2**k) == k for k in range(31))
    blinker = ck.run(ck.Grid([(0, 1), (1, 1), (2, 1)]), ck.RuleSet(), 8)
    profile = ck.complexity_profile(blinker, [1, 2, 4])
    assert profile[0] == (1, 2, 1.0)
    bits = [p[2] for p in profile]
    assert bits == sorted(bits, reverse=True)
    assert ck.coarse_grain(ck.Grid([(0, 0), (3, 3)]), 2).cells() == [(0, 0, 1), (1, 1, 1)]


def dynamics():
    assert abs(ck.lyapunov(4.0) - math.log(2)) < 0.05
    assert abs(ck.lyapunov(2.5) + math.log(2)) < 0.05
    assert abs(ck.lyapunov(3.7) - ck.lyapunov(3.7, method="two_trajectory")) < 0.1
    sweep = ck.logistic_sweep(3.0, 4.0, 0.5)
    assert [r for r, _ in sweep] == [3.0, 3.5, 4.0]


def evolution():
    best, genome, stats = ck.evolve_onemax(seed=1)
    assert best == 64 and genome == "1" * 64
    assert all(b2 >= b1 for (_, b1, _), (_, b2, _) in zip(stats, stats[1:]))
    _, _, stats = ck.coevolve(seed=3)
    assert stats[-1][2] > stats[0][2]


def cas():
    scenario = (ROOT / "scenarios/learners.toml").read_text()
    a = ck.run_scenario(scenario, ticks=20)
    b = ck.run_scenario(scenario, ticks=20)
    assert a == b and len(a) == 20
    assert a[0]["pop_learners"] == 60 and a[0]["pop_drifters"] == 40


if __name__ == "__main__":
    for check in (life, complexity, dynamics, evolution, cas):
        check()
        print(f"ok  {check.__name__}")
    print(f"complexkit {ck.__version__}: all smoke checks passed")
