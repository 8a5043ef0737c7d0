//! Per-instance checks shared by the integration tests and the acceptance
//! harness. Each returns Err with both values on disagreement.
#![allow(dead_code)]

use chromatic_tda::cloud::{maximal_colouring, num_colours, ChromaticPointCloud};
use chromatic_tda::delaunay::{chromatic_delaunay, delaunay_triangulation};
use chromatic_tda::filtration::{
    cech_filtration, chromatic_alpha_filtration, del_cech_filtration, gamma_subfiltration, k_chromatic_gamma, selective_filtration,
    verify_nesting, verify_nesting_chromatic,
};
use chromatic_tda::general_position::check_general_position;
use chromatic_tda::morse::{filtration_gradient, verify_collapse_theorems};
use chromatic_tda::oracles::{brute_force_meb, brute_force_min_stack, is_critical_delaunay_simplex, min_empty_circumsphere};
use chromatic_tda::persistence::{compute_persistence, default_tolerance, diagrams_equal, PersistenceDiagram};
use chromatic_tda::rng::{random_cloud, rng, well_separated_cloud};
use chromatic_tda::simplex::Simplex;
use chromatic_tda::stability::perturbation_experiment;
use chromatic_tda::stack::{min_stack, verify_kkt};
use chromatic_tda::Error;
use rand::RngExt;

pub type Check = Result<(), String>;

/// Random (n, d, colours) drawn from the seed.
fn shape(seed: u64, n: (usize, usize), d: (usize, usize), colours: (usize, usize)) -> (usize, usize, usize) {
    let mut r = rng(seed ^ 0x5eed);
    (r.random_range(n.0..=n.1), r.random_range(d.0..=d.1), r.random_range(colours.0..=colours.1))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn first_diff(a: &PersistenceDiagram, b: &PersistenceDiagram) -> String {
    format!("{} vs {} bars; {:?} / {:?}", a.len(), b.len(), &a.bars[..a.len().min(6)], &b.bars[..b.len().min(6)])
}

/// Del(X, mu) has dimension min(n - 1, d + s) for general-position input.
/// Ok(false) when the sample is not in general position.
pub fn lift_dimension(seed: u64) -> Result<bool, String> {
    let (n, d, k) = shape(seed, (3, 12), (1, 3), (1, 3));
    let c = random_cloud(seed, n, d, k);
    let gp = check_general_position(&c, c.colours()).map_err(|e| e.to_string())?;
    if !gp.general_position {
        return Ok(false);
    }
    let s = num_colours(c.colours()) - 1;
    let tri = chromatic_delaunay(&c, c.colours()).map_err(|e| e.to_string())?;
    let want = (n - 1).min(d + s);
    if tri.complex.dim() != Some(want) || tri.top_dimension != want {
        return Err(format!("seed {seed}: n={n} d={d} s={s}: dimension {:?}, expected {want}", tri.complex.dim()));
    }
    if tri.maximal.iter().any(|m| m.dim() != want) {
        return Err(format!("seed {seed}: a maximal simplex has dimension below {want}"));
    }
    Ok(true)
}

/// Monochromatic chromatic alpha equals alpha (empty circumspheres);
/// the maximal colouring gives Čech (enclosing balls).
pub fn extremal_colourings(seed: u64) -> Check {
    let (n, d, _) = shape(seed, (3, 9), (1, 3), (1, 1));
    let c = random_cloud(seed, n, d, 1);
    let mono = chromatic_alpha_filtration(&c, c.colours()).map_err(|e| e.to_string())?;
    let del = delaunay_triangulation(c.points()).map_err(|e| e.to_string())?;
    if mono.complex() != del.complex {
        return Err(format!("seed {seed}: monochromatic complex differs from Delaunay"));
    }
    for (sigma, v) in mono.entries() {
        let want = if sigma.len() == 1 { 0.0 } else { min_empty_circumsphere(c.points(), sigma).ok_or(format!("{sigma:?} has no empty sphere"))? };
        if !rel_close(*v, want, 1e-9) {
            return Err(format!("seed {seed}: alpha {sigma:?} = {v}, circumsphere oracle {want}"));
        }
    }
    let full = chromatic_alpha_filtration(&c, &maximal_colouring(n)).map_err(|e| e.to_string())?;
    if full.len() != (1usize << n) - 1 {
        return Err(format!("seed {seed}: maximal colouring gave {} simplices", full.len()));
    }
    for (sigma, v) in full.entries() {
        let pts: Vec<&[f64]> = sigma.vertices().iter().map(|&i| c.point(i)).collect();
        let want = brute_force_meb(&pts).map_err(|e| e.to_string())?.1;
        if !rel_close(*v, want, 1e-9) {
            return Err(format!("seed {seed}: maximal colouring {sigma:?} = {v}, enclosing ball {want}"));
        }
    }
    Ok(())
}

/// Čech, Delaunay–Čech and chromatic alpha have equal diagrams.
pub fn theorem_b_diagrams(seed: u64) -> Check {
    let (n, _, k) = shape(seed, (4, 12), (2, 2), (1, 3));
    let c = random_cloud(seed, n, 2, k);
    let mu = c.colours();
    let err = |e: Error| format!("seed {seed}: {e}");
    let cech = cech_filtration(&c, None).map_err(err)?;
    let top = n - 1;
    let a = compute_persistence(&cech, top).map_err(err)?;
    let b = compute_persistence(&del_cech_filtration(&c, mu).map_err(err)?, top).map_err(err)?;
    let al = compute_persistence(&chromatic_alpha_filtration(&c, mu).map_err(err)?, top).map_err(err)?;
    let tol = |x: &PersistenceDiagram, y: &PersistenceDiagram| default_tolerance(x, y);
    if !diagrams_equal(&a, &b, tol(&a, &b)) {
        return Err(format!("seed {seed}: Čech vs DelČech: {}", first_diff(&a, &b)));
    }
    if !diagrams_equal(&a, &al, tol(&a, &al)) {
        return Err(format!("seed {seed}: Čech vs alpha: {}", first_diff(&a, &al)));
    }
    Ok(())
}

/// Theorems A and B: every collapse at every critical radius succeeds.
pub fn collapses(seed: u64) -> Result<usize, String> {
    let (n, _, k) = shape(seed, (4, 8), (2, 2), (1, 3));
    let c = random_cloud(seed, n, 2, k);
    let rep = verify_collapse_theorems(&c, c.colours(), &maximal_colouring(n), None).map_err(|e| format!("seed {seed}: {e}"))?;
    if let Some(f) = rep.failures().next() {
        return Err(format!("seed {seed}: theorem {} step {} r={} failed: {:?}", f.theorem, f.step, f.r, f.error));
    }
    Ok(rep.checks.len())
}

/// Intervals partition, values constant on intervals and increasing across
/// quotient edges; monochromatic critical simplices match the circumsphere
/// oracle.
pub fn morse_structure(seed: u64) -> Check {
    let (n, d, k) = shape(seed, (3, 9), (1, 3), (1, 3));
    let c = random_cloud(seed, n, d, k);
    let mu = c.colours();
    let err = |e: Error| format!("seed {seed}: {e}");
    let all: Vec<usize> = (0..n).collect();
    for e in [vec![], all] {
        let sel = selective_filtration(&c, mu, &e, None).map_err(err)?;
        let grad = filtration_gradient(&c, mu, &sel).map_err(err)?;
        let chk = grad.check().map_err(err)?;
        let tol = 1e-9 * c.scale().max(1.0);
        if !chk.holds(tol) {
            return Err(format!("seed {seed} |E|={}: {chk:?}", e.len()));
        }
        if k == 1 && e.len() == n {
            let crit: Vec<Simplex> = grad.field.critical();
            for s in grad.complex.iter() {
                let want = is_critical_delaunay_simplex(c.points(), s);
                if want != crit.contains(s) {
                    return Err(format!("seed {seed}: {s:?} critical={} but oracle says {want}", !want));
                }
            }
        }
    }
    Ok(())
}

/// One random min_stack instance (d <= 3, at most 3 colours).
pub fn kkt_instance(seed: u64) -> (ChromaticPointCloud, Simplex, Vec<usize>) {
    let (n, d, k) = shape(seed, (2, 8), (1, 3), (1, 3));
    let c = random_cloud(seed, n, d, k);
    let mut r = rng(seed ^ 0xabcd);
    let size = r.random_range(1..=n.min(d + 2));
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = r.random_range(i..n);
        idx.swap(i, j);
    }
    let sigma = Simplex::new(idx[..size].to_vec()).unwrap();
    let e: Vec<usize> = idx[size..].iter().copied().filter(|_| r.random::<f64>() < 0.7).collect();
    (c, sigma, e)
}

/// min_stack agrees with the cutting-plane oracle and its certificate verifies.
/// Ok(true) when a stack exists.
pub fn kkt_vs_oracle(seed: u64) -> Result<bool, String> {
    let (c, sigma, e) = kkt_instance(seed);
    let mu = c.colours();
    let oracle = brute_force_min_stack(&c, mu, &sigma, &e).map_err(|e| e.to_string())?;
    match (min_stack(&c, mu, &sigma, &e), oracle) {
        (Ok((st, cert)), Some(o)) => {
            if !verify_kkt(&st, &cert, &c, mu, &sigma, &e) {
                return Err(format!("seed {seed}: certificate for {sigma:?} fails verification"));
            }
            if (st.rad() - o.rad()).abs() > 1e-6 * c.scale().max(1.0) {
                return Err(format!("seed {seed}: {sigma:?} E={e:?}: radius {} vs oracle {}", st.rad(), o.rad()));
            }
            Ok(true)
        }
        (Err(Error::NoStack), None) => Ok(false),
        (Ok((st, _)), None) => Err(format!("seed {seed}: solver radius {} but oracle finds no stack", st.rad())),
        (Err(Error::NoStack), Some(o)) => Err(format!("seed {seed}: solver says NoStack, oracle radius {}", o.rad())),
        (Err(e), _) => Err(format!("seed {seed}: {e}")),
    }
}

/// Rad_VR <= Rad_Čech <= delta Rad_VR on the Delaunay complex and on Čech.
pub fn nesting(seed: u64) -> Check {
    let (n, d, k) = shape(seed, (3, 10), (1, 3), (1, 3));
    let c = random_cloud(seed, n, d, k);
    let a = verify_nesting_chromatic(&c, c.colours()).map_err(|e| e.to_string())?;
    let b = verify_nesting(&c, &cech_filtration(&c, None).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    for r in [a, b] {
        if !r.violations.is_empty() || r.max_ratio > r.delta + 1e-12 {
            return Err(format!("seed {seed}: {} violations, max ratio {} > {}", r.violations.len(), r.max_ratio, r.delta));
        }
    }
    Ok(())
}

/// eta-perturbation keeps the complex and moves Rips values and the
/// diagram by at most eta.
pub fn stability(seed: u64, eta: f64) -> Check {
    let (n, _, k) = shape(seed, (5, 30), (2, 2), (1, 3));
    let c = well_separated_cloud(seed, n, 2, k, 0.05);
    let rep = perturbation_experiment(&c, c.colours(), eta, seed).map_err(|e| e.to_string())?;
    if !rep.within_bounds() {
        return Err(format!("seed {seed}: {rep:?}"));
    }
    Ok(())
}

/// k-chromatic Γ-subfiltrations of Čech, Delaunay–Čech and chromatic alpha
/// have equal diagrams, for every k.
pub fn gamma_diagrams(seed: u64) -> Check {
    let (n, _, _) = shape(seed, (4, 10), (2, 2), (3, 3));
    let c = random_cloud(seed, n, 2, 3);
    let mu = c.colours();
    let err = |e: Error| format!("seed {seed}: {e}");
    let cech = cech_filtration(&c, None).map_err(err)?;
    let dc = del_cech_filtration(&c, mu).map_err(err)?;
    let al = chromatic_alpha_filtration(&c, mu).map_err(err)?;
    for k in 1..=3 {
        let g = k_chromatic_gamma(3, k);
        let dg: Vec<PersistenceDiagram> = [&cech, &dc, &al]
            .iter()
            .map(|f| compute_persistence(&gamma_subfiltration(f, mu, &g)?, n - 1))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        for (name, other) in [("DelČech", &dg[1]), ("alpha", &dg[2])] {
            if !diagrams_equal(&dg[0], other, default_tolerance(&dg[0], other)) {
                return Err(format!("seed {seed} k={k}: Čech vs {name}: {}", first_diff(&dg[0], other)));
            }
        }
    }
    Ok(())
}
