"""Smoke test for the krust extension module.

Build it first:  pip install --no-build-isolation -e crates/python
"""
from pathlib import Path

import krust

ROOT = Path(__file__).resolve().parent.parent
WALK = ROOT / "crates" / "core" / "corpus" / "walkthrough"


def main():
    src = "fn main() { let mut x = 1; x += 2; println!(\"{}\", x); }"
    assert "x += 2" in krust.parse(src)

    out = krust.run(src)
    assert out.status == "ok" and out.exit_code == 0, out
    assert out.output == "3\n"

    bad = krust.run("fn main() { let x = 1; x = 2; }")
    assert bad.status == "semantic_error" and bad.category is not None and bad.line == 1, bad

    gcd = (WALK / "gcd.rs").read_text()
    assert krust.run(gcd).output.strip().endswith("6")

    dbg = krust.Debugger(gcd)
    rules = dbg.step(5)
    assert len(rules) == 5 and dbg.steps == 5
    assert dbg.cell("nextLoc").startswith("<nextLoc>")
    dbg.execute("run")
    assert dbg.state == "done", dbg.state

    ok = krust.check(gcd, (WALK / "gcd.spec").read_text())
    assert ok.kind == "verified" and ok.cases == 2500, ok
    tight = krust.check(gcd, (WALK / "gcd_tight.spec").read_text())
    assert tight.kind == "falsified", tight
    assert tight.machine_line.startswith("FALSIFIED")

    for f in sorted(WALK.glob("*.rs")):
        assert krust.lint(f.read_text()) is None, f

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
