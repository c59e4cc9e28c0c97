//! One function per subcommand; each returns its report.

use ltphi_core::charp::{
    conjugating_matrix, default_gamma_values, functor_d_unramified, functor_v_const, functor_v_series, galois_matrix,
    gamma_action, Descent, NormField,
};
use std::sync::Arc;
use ltphi_core::fields::{make_field, FieldDesc, FieldElem, FiniteField};
use ltphi_core::lift0::{functor_v_lift, CoeffRing};
use ltphi_core::localnum::{lt_extension_criterion, Extension, LocalInt, LocalRing, LocalRingDesc};
use ltphi_core::matrix::{self, Mat};
use ltphi_core::ring::Ring;
use ltphi_core::twotower::{
    isomorphic_const, projlim_reconstruct, transport_const, transport_lift, certifies_conjugacy, Side, TowerData,
    TwoTowerSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Context, RunConfig};
use crate::error::{CliError, Result};
use crate::report::Report;
use crate::spec::{matrix_rows, ModuleSpec, Over};

/// Index window used for projective limits.
pub const WINDOW: (i64, i64) = (0, 3);

pub fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

pub fn group_law(cfg: &RunConfig) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("group-law", cfg);
    out.field("F", ctx.lt.group_law().text());
    Ok(out)
}

pub fn lt_mul(cfg: &RunConfig, a: i64) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("lt-mul", cfg);
    let a = ctx.base.from_i64(a);
    out.field("a", a.digits_text());
    out.field("[a](X)", ctx.lt.lt_mul(&a)?.text("X"));
    Ok(out)
}

pub fn torsion(cfg: &RunConfig, level: u32) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("torsion", cfg);
    let t = ctx.lt.torsion_polynomial(level)?;
    let q = ctx.lt.q();
    let expected = q.pow(level) - q.pow(level - 1);
    out.field("level", level);
    out.field("polynomial", t.text());
    out.field("degree", t.degree());
    out.field("expected degree", expected);
    out.field("eisenstein", t.eisenstein);
    out.property("torsion.eisenstein", 1, t.eisenstein && t.degree() as u64 == expected);
    Ok(out)
}

/// `W(k)[ϖ]/(T^2 + c)` at precision `m`.
pub fn quadratic(p: u64, c: i64, m: u32) -> Result<std::sync::Arc<LocalRingDesc>> {
    Ok(LocalRingDesc::eisenstein(&make_field(p, 1)?, &[vec![c], vec![0]], m)?)
}

pub fn norm_check(cfg: &RunConfig) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("norm-check", cfg);
    let p = cfg.p as i64;
    let pi = ctx.pi();
    let mut cases = vec![(format!("unramified s={}", cfg.s), ctx.base.desc().clone(), ctx.top.desc().clone(), true)];
    // the ramified examples are quadratic over Q_p
    let qp = LocalRingDesc::unramified(&make_field(cfg.p, 1)?, cfg.m)?;
    cases.push(("Q_p(sqrt(-p))".into(), qp.clone(), quadratic(cfg.p, p, 2 * cfg.m)?, true));
    cases.push(("Q_p(sqrt(p))".into(), qp, quadratic(cfg.p, -p, 2 * cfg.m)?, false));
    for (name, base, top, expected) in cases {
        let ext = Extension::new(&base, &top)?;
        let pi = if base == *ctx.base.desc() { pi.clone() } else { LocalInt::uniformizer(&base) };
        let varpi = if top.is_unramified() { ext.embed(&pi)? } else { LocalInt::uniformizer(&top) };
        let norm = ext.norm(&varpi)?;
        let verdict = lt_extension_criterion(&pi, &varpi, &ext)?;
        out.line(format!("{name}: N(varpi) = {} criterion={verdict}", norm.digits_text()));
        out.property(&format!("norm.{}", name.replace(' ', "_")), 1, verdict == expected);
    }
    Ok(out)
}

pub fn gamma_act(cfg: &RunConfig, c: i64) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("gamma-act", cfg);
    let c = ctx.base.from_i64(c);
    if !c.is_unit() {
        return Err(CliError::Usage("gamma-act needs a unit of O_F".into()));
    }
    let e = NormField::new(&ctx.lt, &ctx.k_k, &[])?;
    let u = e.u();
    let image = gamma_action(&c, &u, &ctx.lt)?;
    out.field("c", c.digits_text());
    out.field("gamma(u)", image.text("u"));
    let lhs = gamma_action(&c, &e.q_power(&u), &ctx.lt)?;
    out.property("gamma.commutes_with_q_power", 1, lhs.agrees(&e.q_power(&image)));
    Ok(out)
}

fn field_rows(m: &Mat<FieldElem>) -> Vec<String> {
    matrix_rows(m, |x| x.digits_text())
}

fn local_rows(m: &Mat<LocalInt>) -> Vec<String> {
    matrix_rows(m, |x| x.compact_text())
}

fn etale_field(a: &Mat<FieldElem>) -> Result<()> {
    let ring = FiniteField(a.get(0, 0).desc().clone());
    match matrix::inverse(&ring, a) {
        Some(_) => Ok(()),
        None => Err(ltphi_core::Error::NotEtale.into()),
    }
}

fn etale_local(a: &Mat<LocalInt>) -> Result<()> {
    let ring = LocalRing(a.get(0, 0).desc().clone());
    match matrix::inverse(&ring, a) {
        Some(_) => Ok(()),
        None => Err(ltphi_core::Error::NotEtale.into()),
    }
}

pub fn v_solve(cfg: &RunConfig, spec: &ModuleSpec) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("v-solve", cfg);
    let e = ctx.e();
    out.field("rank", spec.rank);
    match (spec.over, spec.is_constant()) {
        (Over::E, true) => {
            let a = spec.field_matrix(&ctx.k_k)?;
            etale_field(&a)?;
            let sol = functor_v_const(&a, e)?;
            out.field("mode", "constant");
            out.field("field", format!("ff({},{})", sol.field.p(), sol.field.degree()));
            out.field("dim", sol.dimension());
            for (i, v) in sol.basis.iter().enumerate() {
                let parts: Vec<String> = v.iter().map(|x| x.digits_text()).collect();
                out.field(&format!("v{}", i + 1), parts.join(" ; "));
            }
            let ring = FiniteField(sol.field.clone());
            let ok = sol.basis.iter().all(|v| {
                let av = matrix::mul_vec(&ring, &sol.matrix, v).expect("square");
                v.iter().zip(&av).all(|(x, y)| x.frobenius(e as u64) == *y)
            });
            out.property("v.equation", sol.basis.len(), ok);
            out.property("v.dimension", 1, sol.dimension() == spec.rank);
        }
        (Over::E, false) => {
            let a = spec.series_matrix(&ctx.k_k)?;
            let sol = functor_v_series(&a, e, cfg.n as i64)?;
            out.field("mode", format!("series to u^{}", cfg.n));
            out.field("field", format!("ff({},{})", sol.field.p(), sol.field.degree()));
            out.field("dim", sol.basis.len());
            for (i, v) in sol.basis.iter().enumerate() {
                let parts: Vec<String> = v.iter().map(|x| x.text("u")).collect();
                out.field(&format!("v{}", i + 1), parts.join(" ; "));
            }
            out.property("v.dimension", 1, sol.basis.len() == spec.rank);
        }
        (Over::A, _) => {
            let a = spec.local_matrix(&ctx.top)?;
            etale_local(&a)?;
            let sol = functor_v_lift(&a)?;
            out.field("mode", format!("lifted mod p^{}", cfg.m));
            out.field("field", format!("ff({},{})", sol.field().p(), sol.field().degree()));
            out.field("dim", sol.basis.len());
            for (i, v) in sol.basis.iter().enumerate() {
                let parts: Vec<String> = v.iter().map(|x| x.compact_text()).collect();
                out.field(&format!("v{}", i + 1), parts.join(" ; "));
            }
            let up = Extension::new(ctx.top.desc(), &sol.ring)?;
            let a_up = a.try_map(|x| up.embed(x))?;
            let ring = LocalRing(sol.ring.clone());
            let mut ok = true;
            for v in &sol.basis {
                let av = matrix::mul_vec(&ring, &a_up, v)?;
                for (x, y) in v.iter().zip(&av) {
                    ok &= x.frobenius(sol.e as u64)?.sub(y).is_zero();
                }
            }
            out.property("v.equation", sol.basis.len(), ok);
        }
    }
    Ok(out)
}

pub fn d_descend(cfg: &RunConfig, spec: &ModuleSpec, level: u32) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("d-descend", cfg);
    if spec.over != Over::E {
        return Err(CliError::Unsupported("descent is offered over E only".into()));
    }
    if level == 0 {
        return Err(CliError::Usage("level must be at least 1".into()));
    }
    let big = make_field(cfg.p, ctx.e() * level)?;
    let c = spec.field_matrix(&big)?;
    etale_field(&c)?;
    let d = functor_d_unramified(&c, &ctx.k_k, level)?;
    out.field("extension", format!("ff({},{})", big.p(), big.degree()));
    out.field("twisted", d.twisted);
    for row in field_rows(&d.trivializer) {
        out.field("B", row);
    }
    for row in field_rows(&d.module.phi) {
        out.field("matPhi", row);
    }
    out.property("d.round_trip", 1, recovers(&d, &c, &ctx.k_k)?);
    Ok(out)
}

/// Whether `V` of a descended module gives back the representation `c`:
/// the trivial one for a twisted cocycle, otherwise a conjugate of `c`.
pub fn recovers(d: &Descent, c: &Mat<FieldElem>, k: &Arc<FieldDesc>) -> Result<bool> {
    let sol = functor_v_const(&d.module.phi, k.degree())?;
    let r = galois_matrix(&sol, k)?;
    Ok(if d.twisted {
        matrix::is_identity(&FiniteField(k.clone()), &r)
    } else {
        let r_up = r.try_map(|x| x.embed(&d.extension))?;
        conjugating_matrix(&r_up, c)?.is_some()
    })
}

pub fn random_local(ring: &LocalRing, rng: &mut impl Rng) -> LocalInt {
    let desc = ring.desc();
    let order = desc.residue().order().expect("residue field bounded");
    let digits: Vec<FieldElem> =
        (0..desc.precision()).map(|_| FieldElem::from_index(desc.residue(), rng.gen_range(0..order))).collect();
    LocalInt::from_digits(desc, &digits)
}

pub fn lifted_towers(ctx: &Context) -> Result<(TwoTowerSystem<ltphi_core::twotower::LocalConstants>, TowerData)> {
    let varpi_lt = ctx.varpi_lt()?;
    let pi_side = CoeffRing::new(&ctx.lt, ctx.top.desc(), &[])?;
    let varpi_side = CoeffRing::new(&varpi_lt, ctx.top.desc(), &[])?;
    let sys = TwoTowerSystem::lifted(&pi_side, &varpi_side, ctx.cfg.n)?;
    Ok((sys, TowerData { pi: ctx.lt.clone(), varpi: varpi_lt }))
}

pub fn projlim(cfg: &RunConfig, fault: Option<usize>) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("projlim", cfg);
    let (sys, _) = lifted_towers(&ctx)?;
    let mut rng = rng(cfg, 10);
    let w: Vec<(u32, LocalInt)> = (0..cfg.n.min(4)).map(|b| (b, random_local(&ctx.top, &mut rng))).collect();
    let mut seq = sys.diagonal_varpi(&w, WINDOW)?;
    out.field("window", format!("[{},{}]", WINDOW.0, WINDOW.1));
    out.field("input", seq.entries[0].text());
    match fault {
        None => {
            let limit = projlim_reconstruct(&sys, &seq)?;
            out.field("limit", limit.text(sys.constants()));
            out.field(
                "certificate",
                format!("digits={} entries={}", limit.certificate.digits, limit.certificate.entries_checked),
            );
            let expect: Vec<(u32, LocalInt)> = w.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
            let ok = limit.terms.len() == expect.len()
                && limit.terms.iter().zip(&expect).all(|(a, b)| a.0 == b.0 && a.1.sub(&b.1).is_zero());
            out.property("projlim.round_trip", 1, ok);
        }
        Some(digit) => {
            seq.inject_fault(&sys, 0, digit)?;
            out.field("fault", format!("varpi^{digit} added at index {}", WINDOW.0));
            let result = projlim_reconstruct(&sys, &seq);
            let detected = match &result {
                Err(e) => {
                    out.field("detected", e);
                    matches!(e, ltphi_core::Error::NoLimit { digit: t } if *t == digit)
                        || (digit == 0 && matches!(e, ltphi_core::Error::NotCompatible { .. }))
                }
                Ok(_) => {
                    out.field("detected", "none");
                    digit >= cfg.m as usize
                }
            };
            out.property("projlim.fault_detected", 1, detected);
        }
    }
    Ok(out)
}

fn other(side: Side) -> Side {
    match side {
        Side::Pi => Side::Varpi,
        Side::Varpi => Side::Pi,
    }
}

pub fn compare(cfg: &RunConfig, spec: &ModuleSpec) -> Result<Report> {
    let ctx = Context::new(cfg)?;
    let mut out = Report::new("compare", cfg);
    let (first, second) = match spec.side {
        Side::Pi => ("Phi(D)", "Psi(Phi(D))"),
        Side::Varpi => ("Psi(D)", "Phi(Psi(D))"),
    };
    out.field("window", format!("[{},{}]", WINDOW.0, WINDOW.1));
    let verdict = match spec.over {
        Over::E => {
            let a = spec.field_matrix(&ctx.k_k)?;
            etale_field(&a)?;
            let fwd = transport_const(&a, spec.side, WINDOW)?;
            let back = transport_const(&fwd.matrix, other(spec.side), WINDOW)?;
            for row in field_rows(&fwd.matrix) {
                out.field(first, row);
            }
            for row in field_rows(&back.matrix) {
                out.field(second, row);
            }
            out.field("limits checked", fwd.limits_checked + back.limits_checked);
            etale_field(&fwd.matrix)?;
            isomorphic_const(&a, &back.matrix)?
        }
        Over::A => {
            let a = spec.local_matrix(&ctx.top)?;
            etale_local(&a)?;
            let (_, towers) = lifted_towers(&ctx)?;
            let fwd = transport_lift(&a, &towers, spec.side, WINDOW)?;
            let back = transport_lift(&fwd.matrix, &towers, other(spec.side), WINDOW)?;
            for row in local_rows(&fwd.matrix) {
                out.field(first, row);
            }
            for row in local_rows(&back.matrix) {
                out.field(second, row);
            }
            out.field("limits checked", fwd.limits_checked + back.limits_checked);
            etale_local(&fwd.matrix)?;
            let ring = LocalRing(ctx.top.desc().clone());
            match (&fwd.conjugator, &back.conjugator) {
                (Some(p1), Some(p2)) => certifies_conjugacy(&matrix::mul(&ring, p2, p1)?, &a, &back.matrix)?,
                _ => false,
            }
        }
    };
    out.field("rank", spec.rank);
    out.field("verdict", if verdict { "isomorphic" } else { "not isomorphic" });
    out.property("compare.round_trip", 1, verdict);
    Ok(out)
}

/// Γ defaults are flagged in output since the choice of generators is ours.
pub fn gamma_note(ctx: &Context) -> Result<String> {
    let gens = default_gamma_values(&ctx.lt)?;
    let parts: Vec<String> = gens.iter().map(|g| g.digits_text()).collect();
    Ok(format!("default gamma generators (chosen): {}", parts.join(", ")))
}
