//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qtriple::gns::{self, HalfInt, Label};
use qtriple::isodeform::{self, BigradedOp, Grading, Matrix, Theta, TorusModel};
use qtriple::ncpoly::{Algebra, CanonicalMonomial, NcPoly, Parity, QParam};
use qtriple::rep::{self, TruncationSpec};
use qtriple::triple::{self, DiracSpec};

const QS: [f64; 3] = [0.3, 0.5, 0.8];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict { pass, detail: detail.into() }
    }
}

fn alg(q: f64) -> Algebra {
    Algebra::new(QParam::new(q).unwrap())
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn relations() -> Verdict {
    let start = Instant::now();
    let t = TruncationSpec::new(16, 8, 2).unwrap();
    let mut worst: f64 = 0.0;
    for q in QS {
        for r in rep::relation_residuals(&t, QParam::new(q).unwrap()).unwrap() {
            worst = worst.max(r.residual);
        }
    }
    let elapsed = start.elapsed();
    Verdict::new(worst <= 1e-12 && within(elapsed, 5.0), format!("max residual {worst:.2e}, {:.2} s", elapsed.as_secs_f64()))
}

fn normal_form() -> Verdict {
    let start = Instant::now();
    let a = alg(0.5);
    // wide enough that an 8-letter word never reaches the Fock or winding edge
    let t = TruncationSpec::new(16, 12, 2).unwrap();
    let worst = rep::random_words(0, 200, 8).iter().map(|w| rep::normal_form_residual(&a, w, &t)).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    Verdict::new(worst <= 1e-10 && within(elapsed, 30.0), format!("max residual {worst:.2e}, {:.2} s", elapsed.as_secs_f64()))
}

fn haar() -> Verdict {
    let t = TruncationSpec::new(24, 8, 0).unwrap();
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    // at q = 0.3 the bound 10 q^48 is far below one ulp of the result
    for q in [0.5, 0.8] {
        let qp = QParam::new(q).unwrap();
        let bound = 10.0 * q.powi(48);
        for m in CanonicalMonomial::up_to_degree(6) {
            let p = NcPoly::monomial(m);
            let diff = (gns::haar_exact(&p, qp) - gns::haar_numeric(&p, &t, qp)).norm();
            ok &= diff <= bound;
            worst_ratio = worst_ratio.max(diff / bound);
        }
        let a = alg(q);
        let x = NcPoly::monomial(CanonicalMonomial::new(0, 1, 1));
        for n in 0..=6u32 {
            let want = (1.0 - q * q) / (1.0 - q.powi(2 * (n as i32 + 1)));
            let got = gns::haar_exact(&a.pow(&x, n).unwrap(), qp);
            ok &= (got - Complex64::new(want, 0.0)).norm() <= 1e-14;
        }
    }
    Verdict::new(ok, format!("worst |exact - numeric| / bound = {worst_ratio:.2e}"))
}

fn gns_basis() -> Verdict {
    let lmax = HalfInt::from_twice(3);
    let mut ok = true;
    let mut ortho: f64 = 0.0;
    let mut overlap: f64 = 0.0;
    for q in QS {
        let a = alg(q);
        let basis = gns::gram_schmidt_basis(&a, lmax).unwrap();
        ortho = ortho.max(basis.orthonormality_error(&a));
        for (l, n) in basis.counts_by_l() {
            ok &= n == ((l.twice() + 1) * (l.twice() + 1)) as usize;
        }
        ok &= basis.len() == (1..=4).map(|v| v * v).sum::<usize>();
        for label in basis.labels() {
            let t = gns::t_matrix(&a, label).unwrap();
            let e = &basis.get(&label).unwrap().poly;
            overlap = overlap.max(1.0 - gns::gns_inner(&a, &t, e).norm());
        }
    }
    ok &= ortho <= 1e-10 && overlap <= 1e-8;
    Verdict::new(ok, format!("orthonormality {ortho:.2e}, 1 - |overlap| {overlap:.2e}"))
}

fn parity() -> Verdict {
    let a = alg(0.5);
    let basis = gns::gram_schmidt_basis(&a, HalfInt::from_twice(5)).unwrap();
    let mut bad = 0;
    for (label, e) in basis.entries() {
        let sign = if label.l.twice() % 2 == 0 { 1.0 } else { -1.0 };
        if e.poly.z2_act() != e.poly.scale(Complex64::new(sign, 0.0)) {
            bad += 1;
        }
    }
    Verdict::new(bad == 0 && basis.len() == 91, format!("{} vectors, {bad} violations", basis.len()))
}

fn dirac() -> Verdict {
    let lmax = HalfInt::from_twice(6);
    let spec = DiracSpec::new(lmax);
    let labels = spec.labels();
    let d = spec.matrix(&labels);
    let mut ok = true;
    let mut n = 0;
    for l2 in 0..=6 {
        for j2 in (-l2..=l2).step_by(2) {
            for k2 in (-l2..=l2).step_by(2) {
                let want = if j2 == l2 { -(l2 as i64 + 1) } else { l2 as i64 + 1 };
                let label = Label::from_twice(l2, j2, k2).unwrap();
                let i = labels.iter().position(|x| *x == label).unwrap();
                ok &= d[(i, i)] == Complex64::new(want as f64, 0.0);
                n += 1;
            }
        }
    }
    ok &= n == labels.len();

    let mut table: BTreeMap<i64, usize> = BTreeMap::new();
    for row in spec.spectrum_table().iter().filter(|r| r.sector == triple::Sector::Oriented) {
        *table.entry(row.eig).or_default() += row.mult;
    }
    let tally: BTreeMap<i64, usize> = spec.spectrum().into_iter().map(|e| (e.eig, e.mult)).collect();
    ok &= table == tally;

    let restricted = spec.unoriented_spectrum();
    ok &= restricted.iter().all(|e| e.eig.rem_euclid(2) == 1);

    let g = spec.parity_matrix(&labels);
    ok &= &g * &d == &d * &g;
    let report = triple::assemble_unoriented_triple(&alg(0.5), HalfInt::from_twice(4), 0).unwrap();
    ok &= report.passed();
    Verdict::new(ok, format!("{n} labels, restricted spectrum {:?}", restricted.iter().map(|e| e.eig).collect::<Vec<_>>()))
}

fn covering() -> Verdict {
    let a = alg(0.5);
    let cert = triple::certify_covering(&a, 8).unwrap();
    let mut ok = cert.odd_count() == CanonicalMonomial::up_to_degree(8).iter().filter(|m| m.degree() % 2 == 1).count();
    for d in &cert.decompositions {
        let mut sum = NcPoly::zero();
        for (f, g) in &d.parts {
            ok &= f.parity() == Some(Parity::Even);
            sum = &sum + &a.mul(f, &NcPoly::generator(*g));
        }
        ok &= sum == NcPoly::monomial(d.monomial);
    }
    let mut rng = StdRng::seed_from_u64(0);
    let mut moved = 0;
    for _ in 0..100 {
        let x = triple::random_poly(&mut rng, 3, None, 3);
        let y = triple::random_poly(&mut rng, 3, None, 3);
        let p = triple::hilbert_module_product(&a, &x, &y);
        if p.z2_act() != p {
            moved += 1;
        }
    }
    ok &= moved == 0;
    Verdict::new(ok, format!("{} odd monomials reassembled, {moved} module products moved by g", cert.odd_count()))
}

fn summability() -> Verdict {
    let lmax = HalfInt::from_int(20);
    let four = triple::summability_scan(4.0, lmax).unwrap();
    let mut worst_ratio: f64 = 0.0;
    let mut monotone = true;
    for w in four.windows(2).filter(|w| w[0].l2 >= 6) {
        let ratio = w[1].increment / w[0].increment;
        monotone &= ratio < 1.0;
        worst_ratio = worst_ratio.max(ratio);
    }
    let three = triple::summability_scan(3.0, lmax).unwrap();
    let mut spread: Vec<f64> = three.iter().filter(|p| p.l2 >= 10).map(|p| p.increment * (p.l2 + 1) as f64).collect();
    spread.sort_by(f64::total_cmp);
    let (lo, hi) = (spread[0], spread[spread.len() - 1]);
    let s3 = hi / lo <= 1.1;
    let pass = monotone && worst_ratio < 0.9 && s3;
    Verdict::new(pass, format!("s = 4: monotone {monotone}, max ratio beyond l = 3 is {worst_ratio:.4}; s = 3: c(2l+1) in [{lo:.4}, {hi:.4}]"))
}

fn lemmas() -> Verdict {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4, 6, 12] {
        let model = TorusModel::new(n, Theta::rational(1, n as i64).unwrap()).unwrap();
        for r in isodeform::lemma_scan(&model) {
            worst = worst.max(r.residual);
        }
        let zero = TorusModel::new(n, Theta::rational(0, 1).unwrap()).unwrap();
        let dim = zero.dim();
        for (_, x) in zero.generators() {
            let plain = x.reconstruct(dim);
            ok &= isodeform::left_twist(&x, &zero) == plain && isodeform::right_twist(&x, &zero) == plain;
            for (_, y) in zero.generators() {
                ok &= isodeform::star_product(&x, &y, &zero) == isodeform::plain_product(&x, &y, &zero);
            }
        }
    }
    ok &= worst <= 1e-13;
    Verdict::new(ok, format!("max lemma residual {worst:.2e}"))
}

fn random_homogeneous(model: &TorusModel, deg: (usize, usize), rng: &mut StdRng) -> BigradedOp {
    let dim = model.dim();
    let m = Matrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let parts = isodeform::decompose(&m, model);
    BigradedOp::homogeneous(deg, parts.components[&deg].clone())
}

fn twisted_triple() -> Verdict {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [4, 6] {
        let model = TorusModel::new(n, Theta::rational(1, n as i64).unwrap()).unwrap();
        let d = model.p1() + model.p2();
        for c in isodeform::twisted_triple_check(&model, &d, &Grading::Total).unwrap() {
            ok &= c.pass;
            if c.name == "dirac_twist_commutes" {
                detail.push(format!("N = {n}: {:.2e}", c.value));
            }
        }
    }
    // every pair of even bidegrees at N = 4
    let model = TorusModel::new(4, Theta::rational(1, 4).unwrap()).unwrap();
    let mut rng = StdRng::seed_from_u64(0);
    let even: Vec<(usize, usize)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).filter(|(a, b)| (a + b) % 2 == 0).collect();
    let mut leak: f64 = 0.0;
    for &dx in &even {
        let x = random_homogeneous(&model, dx, &mut rng);
        for &dy in &even {
            let y = random_homogeneous(&model, dy, &mut rng);
            let p = isodeform::star_product(&x, &y, &model).reconstruct(model.dim());
            for (deg, c) in isodeform::decompose(&p, &model).components {
                if Grading::Total.parity(deg) != 0 {
                    leak = leak.max(isodeform::max_abs(&c));
                }
            }
        }
    }
    ok &= leak <= 1e-13;
    detail.push(format!("odd leak of even star products {leak:.2e}"));
    Verdict::new(ok, detail.join(", "))
}

fn commutator() -> Verdict {
    let a = alg(0.5);
    let alpha = NcPoly::generator(qtriple::ncpoly::Letter::Alpha);
    let scan = triple::commutator_norm_scan(&a, &alpha, &[3, 4, 5, 6]).unwrap();
    let (prev, last) = (scan[2].1, scan[3].1);
    let change = (last - prev).abs() / prev;
    let norms: Vec<String> = scan.iter().map(|(l2, v)| format!("{l2}/2: {v:.6}")).collect();
    Verdict::new(change < 0.05, format!("relative change {change:.2e}; {}", norms.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("relations", relations),
        ("normal form oracle", normal_form),
        ("haar closed form", haar),
        ("gns orthonormality", gns_basis),
        ("parity", parity),
        ("dirac spectrum", dirac),
        ("covering", covering),
        ("summability", summability),
        ("twist lemmas", lemmas),
        ("twisted triple", twisted_triple),
        ("commutator boundedness", commutator),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {name}: {} [{:.2} s]", i + 1, v.detail, start.elapsed().as_secs_f64());
        if !v.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
