//! WebAssembly bindings for the browser demo. Each export returns a JSON
//! string; the plain functions underneath are what the tests exercise.

use conic_schemes::cyclotomic::{build_cyclotomic_scheme, CyclotomicSpec};
use conic_schemes::elliptic::{build_elliptic_scheme, build_fusion_scheme};
use conic_schemes::fields::BinaryField;
use conic_schemes::permpoly::{h_eval, permpoly_report, PermPolySpec};
use conic_schemes::scheme::SchemeTable;
use conic_schemes::spectra::{eigenmatrix, DEFAULT_SEED};
use conic_schemes::srg::{certify_srg, tensor_srg, CertifyMode, BITSET_LIMIT};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest m offered for the permutation map.
pub const MAX_PERMPOLY_M: u32 = 12;
/// Largest m for scheme constructions in the browser.
pub const MAX_SCHEME_M: u32 = 6;
pub const MAX_PRIME: u32 = 2000;
const BROWSER_SRG_PAIRS: usize = 2000;

type Res = Result<Value, String>;

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn field(m: u32, limit: u32) -> Result<BinaryField, String> {
    if m > limit {
        return Err(format!("m = {m} is above the demo limit {limit}"));
    }
    BinaryField::new(m, None).map_err(err)
}

/// H_{α,γ} on every x ∈ GF(2^m), with the trace of x and of H(x).
pub fn permpoly_map_value(m: u32, k: u32, alpha: u8, gamma: u8) -> Res {
    let f = field(m, MAX_PERMPOLY_M)?;
    let spec = PermPolySpec::new(m, k, alpha, gamma).map_err(err)?;
    let images = f.elements().map(|x| h_eval(x, &spec, &f)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let traces: Vec<u8> = f.elements().map(|x| f.trace(x)).collect();
    let image_traces: Vec<u8> = images.iter().map(|&y| f.trace(y)).collect();
    let (report, _) = permpoly_report(&spec, &f).map_err(err)?;
    Ok(json!({
        "q": f.q(),
        "images": images,
        "traces": traces,
        "image_traces": image_traces,
        "report": report,
    }))
}

fn conic_table(kind: &str, m: u32) -> Result<SchemeTable, String> {
    let f = field(m, MAX_SCHEME_M)?;
    match kind {
        "elliptic" => Ok(build_elliptic_scheme(&f).map_err(err)?.table().clone()),
        "fusion" => Ok(build_fusion_scheme(&f).map_err(err)?.table().clone()),
        other => Err(format!("unknown conic scheme {other:?}")),
    }
}

/// The class of every pair of exterior lines, row-major.
pub fn class_grid_value(kind: &str, m: u32) -> Res {
    let t = conic_table(kind, m)?;
    let n = t.n_points();
    let classes: Vec<u8> = (0..n).flat_map(|x| t.relation().row(x).into_owned()).collect();
    Ok(json!({
        "n": n,
        "d": t.d(),
        "labels": t.params().class_labels,
        "valencies": t.valencies(),
        "pseudocyclic": t.check_pseudocyclic().passed(),
        "classes": classes,
    }))
}

/// Parameters, spectrum and product-graph certification of one scheme.
/// `kind` is "elliptic" or "fusion" (param = m) or "cyclotomic" (param = p).
pub fn scheme_summary_value(kind: &str, param: u32, e: u32) -> Res {
    let table = match kind {
        "cyclotomic" => {
            if param > MAX_PRIME {
                return Err(format!("p = {param} is above the demo limit {MAX_PRIME}"));
            }
            let spec = CyclotomicSpec::prime(param as u64, e as usize).map_err(err)?;
            build_cyclotomic_scheme(&spec).map_err(err)?
        }
        _ => conic_table(kind, param)?,
    };
    let params = table.params();
    let spectrum = eigenmatrix(params, DEFAULT_SEED).map_err(err)?;
    let t = params.common_valency();
    let pseudocyclic = table.check_pseudocyclic().passed();
    let srg = if pseudocyclic {
        let g = tensor_srg(&table).map_err(err)?;
        let mode = if g.v() <= BITSET_LIMIT && !g.is_lazy() {
            CertifyMode::Exact
        } else {
            CertifyMode::Sampled { pairs: BROWSER_SRG_PAIRS, seed: DEFAULT_SEED }
        };
        let cert = certify_srg(&g, mode).map_err(err)?;
        json!({ "claimed": g.claimed(), "pass": cert.passed(), "mode": cert.meta("mode") })
    } else {
        Value::Null
    };
    Ok(json!({
        "n_points": table.n_points(),
        "d": table.d(),
        "valencies": table.valencies(),
        "pseudocyclic": pseudocyclic,
        "t": t,
        "spectrum": spectrum.to_json(),
        "srg": srg,
    }))
}

fn to_js(r: Res) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn permpoly_map(m: u32, k: u32, alpha: u8, gamma: u8) -> Result<String, JsValue> {
    to_js(permpoly_map_value(m, k, alpha, gamma))
}

#[wasm_bindgen]
pub fn class_grid(kind: &str, m: u32) -> Result<String, JsValue> {
    to_js(class_grid_value(kind, m))
}

#[wasm_bindgen]
pub fn scheme_summary(kind: &str, param: u32, e: u32) -> Result<String, JsValue> {
    to_js(scheme_summary_value(kind, param, e))
}
