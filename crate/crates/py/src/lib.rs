//! Python bindings: the tower context with its closure basis, element
//! reduction, integrality tests and the oracle cross-check.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use radtower::cli::parse_element;
use radtower::closure::{
    build_v_basis, extend_by_unit_degrees, integrality_witnesses, render_extended_line, tau,
    verify_closure_with, VBasis,
};
use radtower::oracle;
use radtower::ring::{is_identifier, parse_poly, BasePoly, VarSet};
use radtower::tower::{make_tower, RadicandSpec, TowerCtx, TowerSpec};
use radtower::transforms::check_linear_disjointness;
use std::sync::Arc;

fn value_err(msg: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn build_vars(names: &[String]) -> PyResult<Arc<VarSet>> {
    if names.is_empty() {
        return Err(value_err("variable list must be nonempty"));
    }
    for n in names {
        if !is_identifier(n) {
            return Err(value_err(format!("invalid variable name {n:?}")));
        }
    }
    for i in 1..names.len() {
        if names[..i].contains(&names[i]) {
            return Err(value_err(format!("duplicate variable {:?}", names[i])));
        }
    }
    Ok(VarSet::new(names.to_vec()))
}

/// A validated radical tower with its closure basis.
#[pyclass]
struct Tower {
    ctx: TowerCtx,
    basis: VBasis,
}

#[pymethods]
impl Tower {
    /// Tower(p, vars, radicands, disjoint=None)
    ///
    /// `radicands` is a list of (polynomial text, n) with n = p*d; `disjoint`
    /// an optional list of polynomial texts adjoined by p-th roots of their
    /// residues. Raises ValueError naming the first failed hypothesis.
    #[new]
    #[pyo3(signature = (p, vars, radicands, disjoint = None))]
    fn new(
        p: u32,
        vars: Vec<String>,
        radicands: Vec<(String, u32)>,
        disjoint: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let vars = build_vars(&vars)?;
        let mut specs = Vec::new();
        for (text, n) in &radicands {
            let f = parse_poly(&vars, text).map_err(value_err)?;
            if *n == 0 || n % p != 0 {
                return Err(value_err(format!("degree n = {n}: p must divide n")));
            }
            if (n / p) % p == 0 {
                return Err(value_err(format!("degree n = {n}: p^2 divides n")));
            }
            specs.push(RadicandSpec::new(f, n / p));
        }
        let mut block = Vec::new();
        for text in disjoint.unwrap_or_default() {
            block.push(parse_poly(&vars, &text).map_err(value_err)?);
        }
        let ctx = make_tower(&TowerSpec {
            p,
            radicands: specs,
            disjoint_block: block,
        })
        .map_err(value_err)?;
        let basis = build_v_basis(&ctx);
        Ok(Tower { ctx, basis })
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    fn layer_sizes(&self) -> Vec<usize> {
        self.basis.layer_sizes()
    }

    /// The closure basis, one line per entry.
    fn basis_lines(&self) -> Vec<String> {
        (0..self.basis.len())
            .map(|i| self.basis.render_line(&self.ctx, i))
            .collect()
    }

    /// Basis of the full extension by the unit-degree roots u_i^(d_i) = w_i.
    fn extended_basis_lines(&self) -> PyResult<Vec<String>> {
        let ext = extend_by_unit_degrees(&self.ctx, &self.basis).map_err(value_err)?;
        Ok((0..ext.rank())
            .map(|i| render_extended_line(&self.ctx, &self.basis, &ext, i))
            .collect())
    }

    /// Check all basis products, generator actions and containments.
    fn closure_ok(&self) -> bool {
        verify_closure_with(&self.ctx, &self.basis).passed()
    }

    /// All integrality identities; returns (ok, per-check lines).
    fn witnesses(&self) -> (bool, Vec<String>) {
        let report = integrality_witnesses(&self.ctx);
        let lines = report
            .checks
            .iter()
            .map(|c| {
                if c.ok {
                    format!("{}: ok", c.name)
                } else {
                    format!("{}: FAILED ({})", c.name, c.residual)
                }
            })
            .collect();
        (report.passed(), lines)
    }

    fn witnesses_ok(&self) -> bool {
        integrality_witnesses(&self.ctx).passed()
    }

    /// Express an element (e.g. "3^-1 * (w1 - X)^2") over the basis; returns
    /// (basis line, coefficient) pairs for the nonzero coordinates. Raises
    /// ValueError with the witness when the element is not in the module.
    fn reduce(&self, element: &str) -> PyResult<Vec<(String, String)>> {
        let elem = parse_element(&self.ctx, element).map_err(value_err)?;
        let coords = self.basis.reduce(&self.ctx, &elem).map_err(value_err)?;
        Ok(coords
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.basis.render_line(&self.ctx, i), c.to_string()))
            .collect())
    }

    /// Characteristic-polynomial integrality of an element over the base.
    fn is_integral(&self, element: &str) -> PyResult<bool> {
        let elem = parse_element(&self.ctx, element).map_err(value_err)?;
        Ok(oracle::is_integral(&self.ctx, &elem))
    }

    /// The correction element of radicand i (0-based), rendered.
    fn tau(&self, i: usize) -> PyResult<String> {
        if i >= self.ctx.num_radicands() {
            return Err(value_err("radicand index out of range"));
        }
        Ok(tau(&self.ctx, i).to_string())
    }

    /// The cross term of radicands i < j (0-based), rendered; verified
    /// against its integral equation.
    fn eta(&self, i: usize, j: usize) -> PyResult<String> {
        radtower::closure::eta(&self.ctx, i, j)
            .map(|e| e.to_string())
            .map_err(value_err)
    }

    /// Differential oracle test; returns (ok, report text).
    #[pyo3(signature = (samples = 100, seed = 0))]
    fn crosscheck(&self, samples: usize, seed: u64) -> (bool, String) {
        let report = oracle::membership_crosscheck(&self.ctx, &self.basis, samples, seed, &[]);
        (report.passed(), report.to_string())
    }

    fn __repr__(&self) -> String {
        format!(
            "Tower(p = {}, radicands = {}, block = {}, rank = {})",
            self.ctx.p(),
            self.ctx.num_radicands(),
            self.ctx.num_block(),
            self.basis.len()
        )
    }
}

/// Canonical form of a polynomial over the given variables.
#[pyfunction]
fn canonical_poly(vars: Vec<String>, text: &str) -> PyResult<String> {
    let vars = build_vars(&vars)?;
    Ok(parse_poly(&vars, text).map_err(value_err)?.to_string())
}

/// Linear disjointness modulo p: returns None when disjoint, else the first
/// witness exponent vector whose product of residues is a p-th power.
#[pyfunction]
fn linear_disjointness(p: u32, vars: Vec<String>, gs: Vec<String>) -> PyResult<Option<Vec<u32>>> {
    let vars = build_vars(&vars)?;
    let polys: Vec<BasePoly> = gs
        .iter()
        .map(|t| parse_poly(&vars, t).map_err(value_err))
        .collect::<PyResult<_>>()?;
    let check = check_linear_disjointness(&polys, p).map_err(value_err)?;
    Ok(check
        .witness
        .map(|w| w.into_iter().map(u32::from).collect()))
}

/// Image of a polynomial under x_i -> x_i^k (the symbols then denote k-th
/// roots of the original variables).
#[pyfunction]
fn substitute_kth_roots(vars: Vec<String>, text: &str, k: u32) -> PyResult<String> {
    if k == 0 {
        return Err(value_err("k must be at least 1"));
    }
    let vars = build_vars(&vars)?;
    let f = parse_poly(&vars, text).map_err(value_err)?;
    Ok(radtower::transforms::substitute_kth_roots(&f, k).to_string())
}

#[pymodule]
fn radtower_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tower>()?;
    m.add_function(wrap_pyfunction!(canonical_poly, m)?)?;
    m.add_function(wrap_pyfunction!(linear_disjointness, m)?)?;
    m.add_function(wrap_pyfunction!(substitute_kth_roots, m)?)?;
    Ok(())
}
