//! CSV exports and binary checkpoints.
//!
//! Floats are written in Rust's shortest round-trip form, so identical data
//! always produce identical bytes.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::arnold::{FPrimeProfile, LambdaMin};
use crate::domain::{Grid1D, Profile1D, TorusGrid, TorusState};
use crate::error::{Error, Result};
use crate::evolve::InvariantLedger;
use crate::modal::{GrowthCurve, ModalSolution};

/// Leading bytes of a torus checkpoint.
pub const CHECKPOINT_MAGIC: [u8; 8] = *b"ALPHAEU1";

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    for r in rows {
        out.write_record(&r).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn f(x: f64) -> String {
    format!("{x}")
}

/// `y,value`
pub fn write_profile_csv<W: Write>(w: W, profile: &Profile1D<f64>) -> Result<()> {
    let rows = profile.grid().nodes().iter().zip(profile.values()).map(|(&y, &v)| vec![f(y), f(v)]);
    write_rows(w, &["y", "value"], rows)
}

/// Reads `y,value` rows (header required); `y` must increase.
pub fn read_profile_csv<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_reader(r);
    let (mut ys, mut vs) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Format(format!("row {}: expected two numbers", line + 1)))
        };
        ys.push(parse(0)?);
        vs.push(parse(1)?);
    }
    if ys.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::Format("profile abscissae must increase".into()));
    }
    Ok((ys, vs))
}

/// A tabulated profile from CSV samples taken on `grid`'s nodes.
pub fn profile_from_csv<R: Read>(r: R, grid: &Grid1D<f64>) -> Result<Profile1D<f64>> {
    let (ys, vs) = read_profile_csv(r)?;
    if ys.len() != grid.n() {
        return Err(Error::LengthMismatch { expected: grid.n(), got: ys.len() });
    }
    let scale = grid.width();
    if ys.iter().zip(grid.nodes()).any(|(a, b)| (a - b).abs() > 1e-10 * scale) {
        return Err(Error::Format("profile samples are not on the grid nodes".into()));
    }
    Profile1D::tabulated(grid, vs)
}

/// `k,sigma,re_c,im_c`
pub fn write_growth_curve_csv<W: Write>(w: W, curve: &GrowthCurve) -> Result<()> {
    let rows = curve.points.iter().map(|p| vec![f(p.k), f(p.sigma), f(p.c.re), f(p.c.im)]);
    write_rows(w, &["k", "sigma", "re_c", "im_c"], rows)
}

/// `y,re_phi,im_phi,re_psi,im_psi`
pub fn write_eigenfunction_csv<W: Write>(w: W, mode: &ModalSolution) -> Result<()> {
    let y = mode.phi.grid().nodes();
    let rows = (0..y.len()).map(|i| {
        let (p, s) = (mode.phi.values()[i], mode.psi.values()[i]);
        vec![f(y[i]), f(p.re), f(p.im), f(s.re), f(s.im)]
    });
    write_rows(w, &["y", "re_phi", "im_phi", "re_psi", "im_psi"], rows)
}

/// `alpha,lambda_min,mu_min,mode_kx,mode_n`
pub fn write_lambda_table_csv<W: Write>(w: W, table: &[LambdaMin]) -> Result<()> {
    let rows = table.iter().map(|l| vec![f(l.alpha), f(l.lambda_min), f(l.mu_min), l.mode_kx.to_string(), l.mode_n.to_string()]);
    write_rows(w, &["alpha", "lambda_min", "mu_min", "mode_kx", "mode_n"], rows)
}

/// `t,H,Hc,omega_int,enstrophy,casimir,Mx,stab_norm`; `stab_norm` is empty
/// without a reference state.
pub fn write_ledger_csv<W: Write>(w: W, ledger: &[InvariantLedger]) -> Result<()> {
    let rows = ledger.iter().map(|r| {
        vec![
            f(r.t),
            f(r.h),
            f(r.hc),
            f(r.omega_int),
            f(r.enstrophy),
            f(r.casimir),
            f(r.mx),
            r.stability_norm.map(f).unwrap_or_default(),
        ]
    });
    write_rows(w, &["t", "H", "Hc", "omega_int", "enstrophy", "casimir", "Mx", "stab_norm"], rows)
}

/// `coordinate,f_prime`
pub fn write_f_prime_csv<W: Write>(w: W, profile: &FPrimeProfile) -> Result<()> {
    let rows = profile.samples.iter().map(|s| vec![f(s.coordinate), f(s.value)]);
    write_rows(w, &["coordinate", "f_prime"], rows)
}

/// Header `magic, nx, ny (u64), lx, ly, alpha, t (f64)`, then the vorticity
/// coefficients as `(re, im)` pairs in grid order; all little-endian.
pub fn write_checkpoint<W: Write>(mut w: W, state: &TorusState, t: f64) -> Result<()> {
    let g = state.grid();
    w.write_all(&CHECKPOINT_MAGIC)?;
    w.write_all(&(g.nx as u64).to_le_bytes())?;
    w.write_all(&(g.ny as u64).to_le_bytes())?;
    for x in [g.lx, g.ly, state.alpha(), t] {
        w.write_all(&x.to_le_bytes())?;
    }
    for z in state.omega_hat() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<(TorusState, f64)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::Format("not a torus checkpoint".into()));
    }
    let mut word = [0u8; 8];
    let mut next = |r: &mut R| -> Result<[u8; 8]> {
        r.read_exact(&mut word)?;
        Ok(word)
    };
    let nx = u64::from_le_bytes(next(&mut r)?) as usize;
    let ny = u64::from_le_bytes(next(&mut r)?) as usize;
    let lx = f64::from_le_bytes(next(&mut r)?);
    let ly = f64::from_le_bytes(next(&mut r)?);
    let alpha = f64::from_le_bytes(next(&mut r)?);
    let t = f64::from_le_bytes(next(&mut r)?);
    let grid = TorusGrid::new(nx, ny, lx, ly)?;
    let mut hat = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = f64::from_le_bytes(next(&mut r)?);
        let im = f64::from_le_bytes(next(&mut r)?);
        hat.push(Complex64::new(re, im));
    }
    Ok((TorusState::from_vorticity_hat(grid, hat, alpha)?, t))
}
