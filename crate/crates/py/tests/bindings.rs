use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &str) {
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(etv::etv)(py);
        py.import("sys")
            .unwrap()
            .getattr("modules")
            .unwrap()
            .set_item("etv", &m)
            .unwrap();
        let globals = PyDict::new(py);
        let src = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&src, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn dual_fans_and_volumes() {
    with_module(
        r#"
import etv
from fractions import Fraction
sq = etv.Polytope([[0, 0], [1, 0], [0, 1], [1, 1]])
fan = etv.dual_fan(sq, 1)
assert (fan.n, fan.k, len(fan)) == (1, 1, 2)
assert fan.is_positive() and fan.is_etp()
assert etv.dual_fan(etv.Polytope([[0, 0], [1, 0]]), 1).is_r_generated()
assert fan.weights() == [Fraction(1), Fraction(1)]
a = etv.Polytope([[0, 0], [1, 0]])
b = etv.Polytope([[0, 0], [0, 1]])
assert etv.mixed_volume([a, b]) == Fraction(1, 2)
assert etv.mixed_volume_by_polarization([a, b]) == Fraction(1, 2)
assert etv.mv_zero([a, a])["zero"]
assert etv.Polytope([["0", "0"], ["1/2", "0"], ["0", "2"]]).volume() == Fraction(1, 2)
"#,
    );
}

#[test]
fn algebra_and_json() {
    with_module(
        r#"
import etv, json
h = etv.PLFunction.from_json(json.dumps({"plus": [
    {"w": [{"re": "0", "im": "0"}, {"re": "0", "im": "0"}], "c": "0"},
    {"w": [{"re": "1", "im": "0"}, {"re": "0", "im": "0"}], "c": "0"},
    {"w": [{"re": "0", "im": "0"}, {"re": "1", "im": "0"}], "c": "0"}]}))
c = etv.corner_locus(h)
assert c.k == 3
top = etv.mixed_ma([h, h], seed=3)
assert sum(top.weights()) == 1
assert top.equivalent(c.product(c, seed=7))
assert (c - c).is_zero() and (c + c).equivalent(c.scale(2))
assert etv.Etv.from_json(c.to_json()).equivalent(c)
assert etv.Etv.from_json(c.to_framed_json()).equivalent(c)
assert c.translate([1, 0, 0, 0]).bergman_fan().equivalent(c)
assert etv.ma_zero([h, h])["zero"] is False
g = etv.PLFunction.from_json(json.dumps({"plus": [
    {"w": [{"re": "0", "im": "0"}, {"re": "0", "im": "0"}], "c": "0"},
    {"w": [{"re": "1", "im": "0"}, {"re": "0", "im": "0"}], "c": "0"}]}))
v = etv.ma_zero([g, g])
assert v["zero"] and v["witness"]["p"] == 2
assert etv.conventions()["dc_sign"] == "+1"
"#,
    );
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(
        r#"
import etv
try:
    etv.Etv.from_json("{")
    raise SystemExit("accepted broken JSON")
except etv.EtvValueError:
    pass
try:
    etv.dual_fan(etv.Polytope([[0, 0], [1, 0]]), 5)
    raise SystemExit("accepted k > 2n")
except ValueError:
    pass
assert issubclass(etv.ResourceCapError, ValueError)
"#,
    );
}
