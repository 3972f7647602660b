//! WebAssembly bindings for the browser demo: a correlation report for a
//! standard-form state, the conditional-determinant landscape over
//! measurements, and the eavesdropping scenario.

use gaussian_discord::discord::{conditional_det_matrix, report_standard_form};
use gaussian_discord::entanglement::geof_two_mode_numeric;
use gaussian_discord::families::eavesdrop_scenario;
use gaussian_discord::two_mode::TwoModeStandardForm;
use gaussian_discord::Result;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Log-λ range of the landscape grid.
pub const LOG_LAMBDA_SPAN: f64 = 6.0;

pub fn report_json(a: f64, b: f64, c: f64, d: f64) -> Result<String> {
    let sf = TwoModeStandardForm::normalized(a, b, c, d)?;
    let inv = sf.invariants();
    let report = report_standard_form(&sf)?;
    let geof = geof_two_mode_numeric(&sf.to_cm(), &Default::default())?.value;
    Ok(json!({
        "standard_form": sf,
        "invariants": inv,
        "entangled": inv.nu_tilde_minus < 1.0,
        "geof": geof,
        "report": report,
    })
    .to_string())
}

/// `det ε(λ, θ)` on an `n_lambda × n_theta` grid, row-major in `ln λ`
/// from `−LOG_LAMBDA_SPAN` to `LOG_LAMBDA_SPAN` and `θ` over `[0, π)`.
pub fn landscape(a: f64, b: f64, c: f64, d: f64, n_lambda: usize, n_theta: usize) -> Result<Vec<f64>> {
    let sf = TwoModeStandardForm::normalized(a, b, c, d)?;
    let nl = n_lambda.max(2);
    let mut out = Vec::with_capacity(nl * n_theta);
    for i in 0..nl {
        let t = LOG_LAMBDA_SPAN * (2.0 * i as f64 / (nl - 1) as f64 - 1.0);
        for j in 0..n_theta {
            let theta = std::f64::consts::PI * j as f64 / n_theta as f64;
            out.push(conditional_det_matrix(&sf, t.exp(), theta));
        }
    }
    Ok(out)
}

pub fn eavesdrop_json(s: f64, n: f64, t: f64) -> Result<String> {
    let sc = eavesdrop_scenario(s, n, t)?;
    Ok(json!({
        "geof_a_st": sc.geof_a_st.value,
        "discord_ab_left": sc.discord_ab_left,
        "spectrum_ast": sc.spectrum_ast,
    })
    .to_string())
}

fn js(e: gaussian_discord::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn discord_report(a: f64, b: f64, c: f64, d: f64) -> std::result::Result<String, JsError> {
    report_json(a, b, c, d).map_err(js)
}

#[wasm_bindgen]
pub fn emin_landscape(a: f64, b: f64, c: f64, d: f64, n_lambda: usize, n_theta: usize) -> std::result::Result<Vec<f64>, JsError> {
    landscape(a, b, c, d, n_lambda, n_theta).map_err(js)
}

#[wasm_bindgen]
pub fn eavesdrop(s: f64, n: f64, t: f64) -> std::result::Result<String, JsError> {
    eavesdrop_json(s, n, t).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_has_fields() {
        let v: serde_json::Value = serde_json::from_str(&report_json(2.0, 2.0, 1.5, -1.5).unwrap()).unwrap();
        assert_eq!(v["entangled"], true);
        assert!(v["report"]["d_left"].as_f64().unwrap() > 0.0);
        assert!(report_json(1.0, 1.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn landscape_minimum_matches_closed_form() {
        let (a, b, c, d) = (3.0, 2.0, 1.2, -0.7);
        let grid = landscape(a, b, c, d, 121, 90).unwrap();
        assert_eq!(grid.len(), 121 * 90);
        let v: serde_json::Value = serde_json::from_str(&report_json(a, b, c, d).unwrap()).unwrap();
        let emin = v["report"]["emin_left"].as_f64().unwrap();
        let low = grid.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(low >= emin - 1e-12 && low < emin * 1.01, "{low} {emin}");
    }

    #[test]
    fn eavesdrop_fields() {
        let v: serde_json::Value = serde_json::from_str(&eavesdrop_json(2.0, 3.0, 0.5).unwrap()).unwrap();
        assert!(v["geof_a_st"].as_f64().unwrap() > 0.0);
        assert!(eavesdrop_json(2.0, 3.0, 2.0).is_err());
    }
}
