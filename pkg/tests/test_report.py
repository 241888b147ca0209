import json

from o1kepler.report import SCHEMA_VERSION, VerificationReport, combine


def test_checks_and_json():
    r = VerificationReport("demo")
    r.check("abs", 1.0, 1.0 + 1e-9, 1e-8)
    r.check("rel", 1e6, 1e6 + 1.0, 1e-5, relative=True, n=2)
    r.check_deviation("dev", 2.0, 1.0)
    r.check_equal("eq", 3, 3)
    r.finish()
    assert (r.passed, r.failed, r.ok) == (3, 1, False)
    assert [c.name for c in r.failures()] == ["dev"]
    doc = json.loads(r.to_json())
    assert doc["schema"] == SCHEMA_VERSION
    assert doc["summary"] == {"passed": 3, "failed": 1}
    assert doc["cases"][1]["params"] == {"n": 2}
    assert "wall_time_ms" in r.to_dict(timing=True)["summary"]
    assert "FAIL dev" in str(r)


def test_combine_is_deterministic():
    a, b = VerificationReport("a"), VerificationReport("b")
    a.check("x", 0.1, 0.1 + 2e-17, 1e-12)
    b.check_equal("y", 1, 2)
    doc = combine("all", [a, b])
    assert doc["summary"] == {"passed": 1, "failed": 1}
    assert json.dumps(doc) == json.dumps(combine("all", [a, b]))
