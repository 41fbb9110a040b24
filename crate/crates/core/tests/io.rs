use std::f64::consts::PI;

use alphastab::arnold::{lambda_min_alpha, DomainSpec};
use alphastab::domain::*;
use alphastab::evolve::{compute_invariants, Casimir};
use alphastab::io::*;
use alphastab::modal::{assemble_modal, scan_wavenumbers, solve_modal};
use alphastab::Error;
use rand::SeedableRng;

fn text(f: impl FnOnce(&mut Vec<u8>)) -> String {
    let mut buf = Vec::new();
    f(&mut buf);
    String::from_utf8(buf).unwrap()
}

#[test]
fn profile_roundtrip() {
    let g = Grid1D::chebyshev(-1.0, 1.0, 17).unwrap();
    let p = Profile1D::from_descriptor(&g, Descriptor::Polynomial(vec![0.1, 1.0, -0.3]));
    let s = text(|b| write_profile_csv(b, &p).unwrap());
    assert!(s.starts_with("y,value\n"));
    let back = profile_from_csv(s.as_bytes(), &g).unwrap();
    assert_eq!(back.values(), p.values());
    assert!(back.descriptor().is_none());
}

#[test]
fn profile_csv_errors() {
    let g = Grid1D::chebyshev(-1.0, 1.0, 9).unwrap();
    assert!(matches!(read_profile_csv("y,value\n0,1\nx,2\n".as_bytes()), Err(Error::Format(_))));
    assert!(matches!(read_profile_csv("y,value\n1,1\n0,2\n".as_bytes()), Err(Error::Format(_))));
    assert!(matches!(profile_from_csv("y,value\n0,1\n1,2\n".as_bytes(), &g), Err(Error::LengthMismatch { .. })));
}

#[test]
fn growth_curve_and_eigenfunction_headers() {
    let g = Grid1D::chebyshev(0.0, 2.0 * PI, 64).unwrap();
    let st = build_steady_shear(ShearSource::FromV(Profile1D::from_descriptor(&g, Descriptor::cos(1.0))), 0.1, 0.0).unwrap();
    let curve = scan_wavenumbers(&st, &[0.3, 0.5], 64).unwrap();
    let s = text(|b| write_growth_curve_csv(b, &curve).unwrap());
    assert_eq!(s.lines().next(), Some("k,sigma,re_c,im_c"));
    assert_eq!(s.lines().count(), 3);
    let spec = solve_modal(&assemble_modal(&st, 0.5, 96).unwrap()).unwrap();
    let s = text(|b| write_eigenfunction_csv(b, spec.leading().unwrap()).unwrap());
    assert_eq!(s.lines().next(), Some("y,re_phi,im_phi,re_psi,im_psi"));
    assert_eq!(s.lines().count(), 97);
}

#[test]
fn lambda_table_rows() {
    let spec = DomainSpec::Torus { lx: 2.0 * PI, ly: 2.0 * PI };
    let table: Vec<_> = [0.0, 0.5].iter().map(|&a| lambda_min_alpha(&spec, a, 16).unwrap()).collect();
    let s = text(|b| write_lambda_table_csv(b, &table).unwrap());
    assert_eq!(s, "alpha,lambda_min,mu_min,mode_kx,mode_n\n0,1,1,1,0\n0.5,1.25,1,1,0\n");
}

#[test]
fn ledger_without_reference_leaves_norm_empty() {
    let st = TorusState::from_streamfunction_fn(TorusGrid::square(16).unwrap(), 0.0, |_, y| y.sin()).unwrap();
    let row = compute_invariants(&st, None, &Casimir::Sin, 0.0);
    let s = text(|b| write_ledger_csv(b, &[row]).unwrap());
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("t,H,Hc,omega_int,enstrophy,casimir,Mx,stab_norm"));
    assert!(lines.next().unwrap().ends_with(','));
}

#[test]
fn checkpoint_roundtrip() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let st = TorusState::random(TorusGrid::new(16, 8, 3.0, 1.5).unwrap(), 0.3, 2, &mut rng).unwrap();
    let mut buf = Vec::new();
    write_checkpoint(&mut buf, &st, 2.5).unwrap();
    assert_eq!(&buf[..8], &CHECKPOINT_MAGIC);
    assert_eq!(buf.len(), 8 + 6 * 8 + 16 * 8 * 16);
    let (back, t) = read_checkpoint(buf.as_slice()).unwrap();
    assert_eq!(t, 2.5);
    assert_eq!(back, st);
}

#[test]
fn checkpoint_rejects_garbage() {
    assert!(matches!(read_checkpoint(&b"NOTMAGIC........"[..]), Err(Error::Format(_))));
    let mut buf = Vec::new();
    write_checkpoint(&mut buf, &TorusState::zero(TorusGrid::square(4).unwrap(), 0.1), 0.0).unwrap();
    buf.truncate(buf.len() - 3);
    assert!(matches!(read_checkpoint(buf.as_slice()), Err(Error::Io(_))));
}
