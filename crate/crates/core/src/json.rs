//! JSON encoding of the core types.
//!
//! Exact scalars are written as grammar literals (`"1/2"`, `"(1 - 3/4i)"`), so
//! exact types round-trip bit for bit. Floats use serde_json's shortest
//! round-trip form and complex numbers are `[re, im]`. Decoding errors name
//! the offending path, e.g. `$.num.terms[1].poly[0]`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::charzeros::{Rect, ZeroCluster};
use crate::currents::{Bump, CurrentEval, GrowthCert, NORMALIZATION};
use crate::division::{MembershipResult, TruncationSplit};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::hefer::{HeferGrowthReport, HeferPair, IdentityTranscript, RawTerm, TwoVarExpPoly};
use crate::hring::{BezoutTier, BezoutTriple, HElement, Unit};
use crate::matsmith::{HMatrix, SmithDecomposition, SmithStep};
use crate::parse::parse_scalar;
use crate::poly::PolyC;
use crate::scalar::GaussianRational as Q;
use crate::synthesis::{AdjointReport, ExpSolution, FormalSeries, Mode, Projection, Trajectory};

pub trait ToJson {
    fn to_json(&self) -> Value;
}

pub trait FromJson: Sized {
    fn from_json_at(v: &Value, path: &str) -> Result<Self>;

    fn from_json(v: &Value) -> Result<Self> {
        Self::from_json_at(v, "$")
    }

    fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::SchemaViolation {
            path: "$".into(),
            msg: format!("invalid JSON at line {} column {}: {e}", e.line(), e.column()),
        })?;
        Self::from_json(&v)
    }
}

pub(crate) fn violation(path: &str, msg: impl Into<String>) -> Error {
    Error::SchemaViolation { path: path.into(), msg: msg.into() }
}

pub(crate) fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<(&'a Value, String)> {
    let obj = v.as_object().ok_or_else(|| violation(path, "expected an object"))?;
    let p = format!("{path}.{key}");
    obj.get(key).map(|x| (x, p.clone())).ok_or_else(|| violation(&p, "missing field"))
}

pub(crate) fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| violation(path, "expected an array"))
}

pub(crate) fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| violation(path, "expected an integer"))
}

pub(crate) fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| violation(path, "expected a non-negative integer"))
}

pub(crate) fn float(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| violation(path, "expected a number"))
}

fn items<T>(v: &Value, path: &str, f: impl Fn(&Value, &str) -> Result<T>) -> Result<Vec<T>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| f(x, &format!("{path}[{i}]"))).collect()
}

fn get<T: FromJson>(v: &Value, path: &str, key: &str) -> Result<T> {
    let (x, p) = field(v, path, key)?;
    T::from_json_at(x, &p)
}

impl ToJson for Q {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl FromJson for Q {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let s = v.as_str().ok_or_else(|| violation(path, "expected a Gaussian-rational literal string"))?;
        parse_scalar(s).map_err(|e| violation(path, format!("bad literal {s:?}: {e}")))
    }
}

impl ToJson for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl FromJson for f64 {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        float(v, path)
    }
}

impl ToJson for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
}

impl FromJson for Complex64 {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let a = array(v, path)?;
        if a.len() != 2 {
            return Err(violation(path, "expected [re, im]"));
        }
        Ok(Complex64::new(float(&a[0], &format!("{path}[0]"))?, float(&a[1], &format!("{path}[1]"))?))
    }
}

impl<T: ToJson> ToJson for Vec<T> {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(ToJson::to_json).collect())
    }
}

impl<T: FromJson> FromJson for Vec<T> {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        items(v, path, T::from_json_at)
    }
}

impl ToJson for PolyC {
    fn to_json(&self) -> Value {
        self.coeffs().to_vec().to_json()
    }
}

impl FromJson for PolyC {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(PolyC::new(Vec::<Q>::from_json_at(v, path)?))
    }
}

impl ToJson for ExpPoly {
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms().map(|(j, p)| json!({"exp": j, "poly": p.to_json()})).collect();
        json!({ "terms": terms })
    }
}

impl FromJson for ExpPoly {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let (t, p) = field(v, path, "terms")?;
        let terms = items(t, &p, |x, q| Ok((get_int(x, q, "exp")?, get::<PolyC>(x, q, "poly")?)))?;
        let mut seen = std::collections::BTreeSet::new();
        for (i, (j, _)) in terms.iter().enumerate() {
            if !seen.insert(*j) {
                return Err(violation(&format!("{p}[{i}].exp"), "repeated exponent"));
            }
        }
        Ok(ExpPoly::from_terms(terms))
    }
}

fn get_int(v: &Value, path: &str, key: &str) -> Result<i64> {
    let (x, p) = field(v, path, key)?;
    int(x, &p)
}

fn get_uint(v: &Value, path: &str, key: &str) -> Result<u64> {
    let (x, p) = field(v, path, key)?;
    uint(x, &p)
}

fn get_float(v: &Value, path: &str, key: &str) -> Result<f64> {
    let (x, p) = field(v, path, key)?;
    float(x, &p)
}

impl ToJson for Unit {
    fn to_json(&self) -> Value {
        json!({"c": self.c.to_json(), "k": self.k})
    }
}

impl FromJson for Unit {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let c: Q = get(v, path, "c")?;
        if c.is_zero() {
            return Err(violation(&format!("{path}.c"), "unit constant is zero"));
        }
        Ok(Unit { c, k: get_int(v, path, "k")? })
    }
}

impl ToJson for HElement {
    fn to_json(&self) -> Value {
        json!({
            "expr": self.to_expr_string(),
            "unit": self.unit().to_json(),
            "num": self.num().to_json(),
            "den": self.den().to_json(),
        })
    }
}

impl FromJson for HElement {
    /// Re-runs normalization and the entirety check; `expr` is informational.
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let unit: Unit = get(v, path, "unit")?;
        let num: ExpPoly = get(v, path, "num")?;
        let den: PolyC = get(v, path, "den")?;
        if den.is_zero() {
            return Err(violation(&format!("{path}.den"), "zero denominator"));
        }
        if num.is_zero() {
            return Ok(HElement::zero());
        }
        HElement::from_parts(unit, num, den).map_err(|e| violation(path, e.to_string()))
    }
}

impl ToJson for HMatrix {
    fn to_json(&self) -> Value {
        json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "entries": self.to_rows().iter().map(|r| r.iter().map(ToJson::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

impl FromJson for HMatrix {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let rows = get_uint(v, path, "rows")? as usize;
        let cols = get_uint(v, path, "cols")? as usize;
        let (e, p) = field(v, path, "entries")?;
        let entries: Vec<Vec<HElement>> = items(e, &p, Vec::<HElement>::from_json_at)?;
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(violation(&p, format!("entries do not form a {rows}x{cols} matrix")));
        }
        HMatrix::new(rows, cols, entries.into_iter().flatten().collect()).map_err(|e| violation(path, e.to_string()))
    }
}

impl ToJson for Rect {
    fn to_json(&self) -> Value {
        json!(self.as_array())
    }
}

impl FromJson for Rect {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let a: Vec<f64> = Vec::from_json_at(v, path)?;
        if a.len() != 4 {
            return Err(violation(path, "expected [re_min, re_max, im_min, im_max]"));
        }
        Rect::new(a[0], a[1], a[2], a[3]).map_err(|e| violation(path, e.to_string()))
    }
}

impl ToJson for ZeroCluster {
    fn to_json(&self) -> Value {
        json!({"center": self.center.to_json(), "multiplicity": self.multiplicity, "radius": self.radius})
    }
}

impl FromJson for ZeroCluster {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(ZeroCluster {
            center: get(v, path, "center")?,
            multiplicity: get_uint(v, path, "multiplicity")? as u32,
            radius: get_float(v, path, "radius")?,
        })
    }
}

impl ToJson for Mode {
    fn to_json(&self) -> Value {
        json!({"alpha": self.alpha.to_json(), "poly": self.poly.to_json()})
    }
}

impl FromJson for Mode {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(Mode::new(get(v, path, "alpha")?, get(v, path, "poly")?))
    }
}

impl ToJson for ExpSolution {
    fn to_json(&self) -> Value {
        json!({"modes": self.modes.to_json()})
    }
}

impl FromJson for ExpSolution {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(ExpSolution::from_modes(get(v, path, "modes")?))
    }
}

impl ToJson for Trajectory {
    fn to_json(&self) -> Value {
        json!({"x0": self.x0, "step": self.step, "values": self.values.to_json()})
    }
}

impl FromJson for Trajectory {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let step = get_float(v, path, "step")?;
        if !(step > 0.0) {
            return Err(violation(&format!("{path}.step"), "step must be positive"));
        }
        Ok(Trajectory { x0: get_float(v, path, "x0")?, step, values: get(v, path, "values")? })
    }
}

impl ToJson for FormalSeries {
    fn to_json(&self) -> Value {
        json!({"coeffs": self.coeffs().to_vec().to_json(), "order": self.order()})
    }
}

impl FromJson for FormalSeries {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let coeffs: Vec<Q> = get(v, path, "coeffs")?;
        let order = get_uint(v, path, "order")? as usize;
        if coeffs.len() > order {
            return Err(violation(&format!("{path}.coeffs"), "more coefficients than the truncation order"));
        }
        Ok(FormalSeries::new(coeffs, order))
    }
}

impl ToJson for Bump {
    fn to_json(&self) -> Value {
        json!({"center": self.center.to_json(), "radius": self.radius, "poly": self.poly.to_json()})
    }
}

impl FromJson for Bump {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let poly = match v.get("poly") {
            Some(p) => Vec::<Complex64>::from_json_at(p, &format!("{path}.poly"))?,
            None => Vec::new(),
        };
        Bump::new(get(v, path, "center")?, get_float(v, path, "radius")?, poly).map_err(|e| violation(path, e.to_string()))
    }
}

impl ToJson for CurrentEval {
    fn to_json(&self) -> Value {
        json!({
            "value": self.value.to_json(),
            "lambda_schedule": self.lambda_schedule,
            "samples": self.samples.to_json(),
            "residual": self.residual,
            "flagged": self.flagged,
            "normalization": self.normalization,
        })
    }
}

impl FromJson for CurrentEval {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let (n, p) = field(v, path, "normalization")?;
        if n.as_str() != Some(NORMALIZATION) {
            return Err(violation(&p, "unknown normalization convention"));
        }
        let (f, fp) = field(v, path, "flagged")?;
        Ok(CurrentEval {
            value: get(v, path, "value")?,
            lambda_schedule: get(v, path, "lambda_schedule")?,
            samples: get(v, path, "samples")?,
            residual: get_float(v, path, "residual")?,
            flagged: f.as_bool().ok_or_else(|| violation(&fp, "expected a boolean"))?,
            normalization: NORMALIZATION,
        })
    }
}

impl ToJson for GrowthCert {
    fn to_json(&self) -> Value {
        json!({
            "C": self.c,
            "M": self.m,
            "N": self.n,
            "denom_witness": self.denom_witness.to_json(),
            "samples": self.samples,
            "worst_ray": self.worst_ray,
        })
    }
}

impl FromJson for GrowthCert {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(GrowthCert {
            c: get_float(v, path, "C")?,
            m: get_uint(v, path, "M")? as u32,
            n: get_uint(v, path, "N")? as u32,
            denom_witness: get(v, path, "denom_witness")?,
            samples: get_uint(v, path, "samples")? as usize,
            worst_ray: get_float(v, path, "worst_ray")?,
        })
    }
}

impl ToJson for TwoVarExpPoly {
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .raw_terms()
            .into_iter()
            .map(|t| json!({"coeff": t.coeff.to_json(), "base": t.base, "d": t.d, "zeta": t.zeta, "z": t.z}))
            .collect();
        json!({"expr": self.to_string(), "terms": terms})
    }
}

impl FromJson for TwoVarExpPoly {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let (t, p) = field(v, path, "terms")?;
        let terms = items(t, &p, |x, q| {
            let base: Vec<i64> = items(field(x, q, "base")?.0, &format!("{q}.base"), int)?;
            let base: [i64; 4] = base.try_into().map_err(|_| violation(&format!("{q}.base"), "expected 4 exponents"))?;
            let small = |key: &str| -> Result<Vec<u32>> {
                let (a, ap) = field(x, q, key)?;
                items(a, &ap, |y, yp| uint(y, yp).map(|n| n as u32))
            };
            Ok(RawTerm { coeff: get(x, q, "coeff")?, base, d: get_uint(x, q, "d")? as u32, zeta: small("zeta")?, z: small("z")? })
        })?;
        Ok(TwoVarExpPoly::from_raw_terms(terms))
    }
}

impl ToJson for HeferPair {
    fn to_json(&self) -> Value {
        json!({"h1": self.h1.to_json(), "h2": self.h2.to_json()})
    }
}

impl FromJson for HeferPair {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(HeferPair { h1: get(v, path, "h1")?, h2: get(v, path, "h2")? })
    }
}

impl ToJson for IdentityTranscript {
    fn to_json(&self) -> Value {
        json!({"lhs": self.lhs.to_string(), "rhs": self.rhs.to_string(), "holds": self.holds})
    }
}

impl ToJson for HeferGrowthReport {
    fn to_json(&self) -> Value {
        json!({"M": self.m, "N": self.n, "C": self.c, "C_inner": self.c_inner, "tight_M": self.tight_m, "samples": self.samples})
    }
}

impl ToJson for BezoutTriple {
    fn to_json(&self) -> Value {
        let tier = match self.tier {
            BezoutTier::Euclid => "euclid",
            BezoutTier::JetCorrection => "jet-correction",
        };
        json!({"g": self.g.to_json(), "u": self.u.to_json(), "v": self.v.to_json(), "tier": tier})
    }
}

impl ToJson for SmithStep {
    fn to_json(&self) -> Value {
        match self {
            SmithStep::SwapRows(i, j) => json!({"op": "swap_rows", "i": i, "j": j}),
            SmithStep::SwapCols(i, j) => json!({"op": "swap_cols", "i": i, "j": j}),
            SmithStep::AddRow { target, source, factor } => {
                json!({"op": "add_row", "target": target, "source": source, "factor": factor.to_json()})
            }
            SmithStep::AddCol { target, source, factor } => {
                json!({"op": "add_col", "target": target, "source": source, "factor": factor.to_json()})
            }
            SmithStep::RowBlock { i, j, block } => {
                json!({"op": "row_block", "i": i, "j": j, "block": block.to_vec().to_json()})
            }
            SmithStep::ColBlock { i, j, block } => {
                json!({"op": "col_block", "i": i, "j": j, "block": block.to_vec().to_json()})
            }
            SmithStep::ScaleRow { i, unit } => json!({"op": "scale_row", "i": i, "unit": unit.to_json()}),
        }
    }
}

impl FromJson for SmithStep {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let (op, opp) = field(v, path, "op")?;
        let idx = |k: &str| get_uint(v, path, k).map(|n| n as usize);
        let block = || -> Result<[HElement; 4]> {
            let b: Vec<HElement> = get(v, path, "block")?;
            b.try_into().map_err(|_| violation(&format!("{path}.block"), "expected 4 entries"))
        };
        Ok(match op.as_str() {
            Some("swap_rows") => SmithStep::SwapRows(idx("i")?, idx("j")?),
            Some("swap_cols") => SmithStep::SwapCols(idx("i")?, idx("j")?),
            Some("add_row") => SmithStep::AddRow { target: idx("target")?, source: idx("source")?, factor: get(v, path, "factor")? },
            Some("add_col") => SmithStep::AddCol { target: idx("target")?, source: idx("source")?, factor: get(v, path, "factor")? },
            Some("row_block") => SmithStep::RowBlock { i: idx("i")?, j: idx("j")?, block: block()? },
            Some("col_block") => SmithStep::ColBlock { i: idx("i")?, j: idx("j")?, block: block()? },
            Some("scale_row") => SmithStep::ScaleRow { i: idx("i")?, unit: get(v, path, "unit")? },
            _ => return Err(violation(&opp, "unknown step")),
        })
    }
}

impl ToJson for SmithDecomposition {
    fn to_json(&self) -> Value {
        json!({
            "V": self.v.to_json(),
            "D": self.d.to_json(),
            "W": self.w.to_json(),
            "rank": self.rank,
            "invariant_factors": self.invariant_factors().to_json(),
            "steps": self.steps.to_json(),
        })
    }
}

impl FromJson for SmithDecomposition {
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(SmithDecomposition {
            v: get(v, path, "V")?,
            d: get(v, path, "D")?,
            w: get(v, path, "W")?,
            rank: get_uint(v, path, "rank")? as usize,
            steps: get(v, path, "steps")?,
        })
    }
}

impl ToJson for MembershipResult {
    fn to_json(&self) -> Value {
        json!({
            "member": self.member,
            "gcd": self.gcd.to_json(),
            "cofactors": self.cofactors.to_json(),
            "growth": self.growth.to_json(),
        })
    }
}

impl ToJson for TruncationSplit {
    fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs.to_json(),
            "exact": self.exact.as_ref().map(ToJson::to_json),
            "tail_order": self.tail_order,
        })
    }
}

impl ToJson for Projection {
    fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.to_json(),
            "residual": self.residual,
            "gram_condition": self.gram_condition,
            "ill_conditioned": self.ill_conditioned,
        })
    }
}

impl ToJson for AdjointReport {
    fn to_json(&self) -> Value {
        json!({
            "derivative": [self.derivative.0.to_json(), self.derivative.1.to_json()],
            "shift": [self.shift.0.to_json(), self.shift.1.to_json()],
            "holds": self.holds(),
        })
    }
}

/// Rejects keys outside `allowed`.
pub(crate) fn strict_keys(v: &Value, path: &str, allowed: &[&str]) -> Result<()> {
    let obj: &Map<String, Value> = v.as_object().ok_or_else(|| violation(path, "expected an object"))?;
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(violation(&format!("{path}.{k}"), "unknown field"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_matrix};

    #[test]
    fn exact_round_trips() {
        let e = ExpPoly::from_json(&(&ExpPoly::sigma().pow(2) - &ExpPoly::one()).to_json()).unwrap();
        assert_eq!(e, &ExpPoly::sigma().pow(2) - &ExpPoly::one());
        let m = parse_matrix("[[s-1, (s-1)/z],[z, 1/2 - 3/4i]]").unwrap();
        let back = HMatrix::from_json_str(&m.to_json().to_string()).unwrap();
        assert_eq!(back, m);
        let h = parse_element("3*s^-1*(s - 1 - z)/z^2").unwrap();
        assert_eq!(HElement::from_json(&h.to_json()).unwrap(), h);
        let p = crate::hefer::hefer_pair_n2(&parse_element("s^2 - z/3").unwrap(), 2);
        assert_eq!(HeferPair::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn floats_round_trip() {
        let c = ZeroCluster { center: Complex64::new(0.1, std::f64::consts::TAU), multiplicity: 2, radius: 1e-7 };
        assert_eq!(ZeroCluster::from_json_str(&c.to_json().to_string()).unwrap(), c);
    }

    #[test]
    fn corrupt_input_names_path() {
        let mut v = parse_matrix("[[s-1],[z]]").unwrap().to_json();
        v["entries"][1][0]["num"]["terms"][0]["poly"][1] = json!(7);
        match HMatrix::from_json(&v) {
            Err(Error::SchemaViolation { path, .. }) => assert_eq!(path, "$.entries[1][0].num.terms[0].poly[1]"),
            other => panic!("{other:?}"),
        }
        let s = parse_element("s").unwrap().to_json().to_string();
        assert!(matches!(HElement::from_json_str(&s[..s.len() / 2]), Err(Error::SchemaViolation { .. })));
        let mut v = parse_element("(s-1)/z").unwrap().to_json();
        v["den"] = json!(["0", "0", "1"]);
        assert!(matches!(HElement::from_json(&v), Err(Error::SchemaViolation { path, .. }) if path == "$"));
    }
}
