//! Prints the measured quantities that the regression constants in the
//! acceptance suite are pinned against.
//!
//!     cargo run --release -p qrperm --example calibrate

use std::time::Instant;

use qrperm::corpus::{corpus, CorpusSpec};
use qrperm::disc::{d_exact, d_star, real_star_disc, DiscrepancyReport};
use qrperm::expsum::{erdos_turan_profile, sigma_spectrum, w_sum, weyl_spectrum};
use qrperm::numtheory::{find_primitive_root, mod_pow, primes_between, PrimeModulus};
use qrperm::perm::{bit_reversal, random_perm, rho_exp, sos_perm, TieBreak};
use qrperm::quadratic::Alpha;
use qrperm::scan::{csv_body, digest, scan_psi, ScanOptions};

fn to_f(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn polya_vinogradov() {
    let mut worst: f64 = 0.0;
    for p in primes_between(3, 499) {
        let pm = PrimeModulus::new(p).unwrap();
        let tau = find_primitive_root(&pm);
        let s = rho_exp(&pm, 1, tau).unwrap();
        for k in 1..p {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for &v in s.image() {
                let t = std::f64::consts::TAU * ((k * v as u64) % p) as f64 / p as f64;
                re += t.cos();
                im += t.sin();
                let r = re.hypot(im) / ((p as f64).sqrt() * (p as f64).ln());
                worst = worst.max(r);
            }
        }
    }
    println!("polya-vinogradov: max |incomplete| / (sqrt p ln p), p <= 499: {worst:.6}");
}

fn erdos_turan() {
    let mut worst: f64 = 0.0;
    for s in corpus(CorpusSpec::default()) {
        let n = s.n();
        for m in [n.div_ceil(4), n.div_ceil(2), n] {
            let pts: Vec<f64> = s.image()[..m]
                .iter()
                .map(|&v| v as f64 / n as f64)
                .collect();
            let d = real_star_disc(&pts).unwrap().half_open;
            let spec = if m == n {
                sigma_spectrum(&s, n)
            } else {
                weyl_spectrum(&pts, n)
            };
            let prof = erdos_turan_profile(m, &spec, 1.0);
            for b in prof {
                worst = worst.max(d / b);
            }
        }
    }
    println!("erdos-turan: max D / bound(C = 1) over corpus prefixes: {worst:.6}");
}

fn psi_scan() {
    let t = Instant::now();
    let rows = scan_psi(101, 499, ScanOptions::default()).unwrap();
    let means: Vec<f64> = rows
        .iter()
        .filter(|r| r.statistic == "mean_dstar")
        .map(|r| r.normalized.unwrap())
        .collect();
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(0.0, f64::max);
    println!(
        "psi scan 101..=499: mean D*/ln^2 p in [{lo:.6}, {hi:.6}], digest {} ({:?})",
        digest(&csv_body(&rows).unwrap()),
        t.elapsed()
    );
    let mins: Vec<f64> = rows
        .iter()
        .filter(|r| r.statistic == "argmin_d_exact")
        .map(|r| r.normalized.unwrap())
        .collect();
    println!(
        "psi scan: min_k D / ln p ranges {:.4}..{:.4}",
        mins.iter().copied().fold(f64::INFINITY, f64::min),
        mins.iter().copied().fold(0.0, f64::max)
    );
}

fn golden() {
    let a = Alpha::golden();
    for j in 6..=13 {
        let n = 1usize << j;
        let d = to_f(d_star(&sos_perm(n, &a, TieBreak::Error).unwrap()));
        println!(
            "golden sos n = 2^{j}: D* = {d:.4}, D*/log2 n = {:.6}",
            d / j as f64
        );
    }
}

fn bitrev() {
    for j in 4..=14 {
        let n = 1usize << j;
        let s = bit_reversal(n).unwrap();
        let r = DiscrepancyReport::compute(&s, 512);
        println!(
            "bitrev n = 2^{j}: D_upper = {:.4} (exact: {}), D_upper/log2 n = {:.6}",
            r.d_upper.to_f64(),
            r.is_exact(),
            r.d_upper.to_f64() / j as f64
        );
    }
}

fn random_band() {
    let n = 1024;
    let mut v: Vec<f64> = (0..100)
        .map(|s| to_f(d_star(&random_perm(n, s).unwrap())))
        .collect();
    v.sort_by(f64::total_cmp);
    let med = (v[49] + v[50]) / 2.0;
    println!(
        "random n = 1024: median D* = {med:.4}, / sqrt n = {:.4}, band [{:.2}, {:.2}]",
        med / 32.0,
        0.3 * 32.0,
        3.0 * (1024.0 * 1024f64.ln()).sqrt()
    );
}

fn schmidt() {
    let mut best = f64::INFINITY;
    for s in corpus(CorpusSpec::default())
        .into_iter()
        .filter(|s| s.n() >= 16)
    {
        let d = to_f(d_exact(&s, 512).unwrap());
        best = best.min(d / (s.n() as f64).ln());
    }
    println!("corpus min D / ln n (n >= 16): {best:.6}");
}

fn karacuba_w() {
    let mut worst: f64 = 0.0;
    for p in primes_between(3, 199) {
        let pm = PrimeModulus::new(p).unwrap();
        let g = find_primitive_root(&pm);
        for t in (2..p).filter(|t| (p - 1) % t == 0) {
            let theta = mod_pow(g, (p - 1) / t, p).unwrap();
            let norm = (t as f64).powf(5.0 / 3.0) * (p as f64).powf(0.25);
            for a in 1..p as i64 {
                worst = worst.max(w_sum(&pm, a, 1, theta, t).unwrap() / norm);
            }
        }
    }
    println!("w-sum: max W / (t^(5/3) p^(1/4)), p <= 199: {worst:.6}");
}

fn main() {
    let t = Instant::now();
    polya_vinogradov();
    erdos_turan();
    golden();
    bitrev();
    random_band();
    schmidt();
    karacuba_w();
    psi_scan();
    println!("total {:?}", t.elapsed());
}
