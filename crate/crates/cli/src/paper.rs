//! Printed reference constants for --compare-paper.

use psiseries::BigReal;
use serde_json::{json, Value};

pub enum Printed {
    /// Decimal digits as printed.
    Real(&'static str),
    /// Exact rational or a truncated decimal, compared as text.
    Exact(&'static str),
}

pub struct Entry {
    pub key: &'static str,
    pub value: Printed,
    pub source: &'static str,
}

const fn real(key: &'static str, v: &'static str, source: &'static str) -> Entry {
    Entry { key, value: Printed::Real(v), source }
}

const fn exact(key: &'static str, v: &'static str, source: &'static str) -> Entry {
    Entry { key, value: Printed::Exact(v), source }
}

pub static TABLE: &[Entry] = &[
    real("bst.rho", "3.14085756720293695160", "BST singularity"),
    real("bst.c6", "-0.00150849820940593425", "BST free constant"),
    real("phylo.rho", "1.5704287836014684758040837", "phylogenetic singularity"),
    real("quadtree.rho", "1.37649444105715625755", "quadtree singularity"),
    real("boltzmann1.zeta_inf", "1.47458599237119248035", "Boltzmann nu=1"),
    real("boltzmann2.zeta_inf", "1.76663875028544995731", "Boltzmann nu=2"),
    real("boltzmann2.rho", "-5.51370157671056775506", "Boltzmann nu=2"),
    exact("bst.c1", "-12/5", "BST Frobenius coefficients"),
    exact("bst.c2", "-7/25", "BST Frobenius coefficients"),
    exact("bst.c3", "-14/125", "BST Frobenius coefficients"),
    exact("bst.c4", "-63/1250", "BST Frobenius coefficients"),
    exact("bst.c5", "-161/9375", "BST Frobenius coefficients"),
    exact("bst.n^1", "6", "BST expansion"),
    exact("bst.n^0", "18/5", "BST expansion"),
    exact("bst.n^-5", "336/3125", "BST expansion"),
    exact("bst.n^-6", "1008/3125", "BST expansion"),
    exact("bst.n^-7", "10416/15625", "BST expansion"),
    exact("bst.n^-8", "91728/78125", "BST expansion"),
    exact("bst.n^-9", "8234352/4296875", "BST expansion"),
    exact("bst.n^-10", "12228048/4296875", "BST expansion"),
    exact("bst.n^-11.H_n", "9483264/5078125", "BST expansion"),
    exact("bst.n^-11", "5621191632/726171875", "BST expansion"),
    exact("bst.n^-11.c6", "677376/1625", "BST expansion"),
    exact("bracket.n0=1", "2", "rho bracket table"),
    exact("bracket.n0=2", "2.4494", "rho bracket table"),
    exact("bracket.n0=3", "2.6832", "rho bracket table"),
    exact("bracket.n0=4", "2.8284", "rho bracket table"),
    exact("bracket.n0=5", "2.9277", "rho bracket table"),
    exact("bracket.n0=6", "3", "rho bracket table"),
    exact("bracket.n0=7", "3.0274", "rho bracket table"),
    exact("bracket.n0=8", "3.0488", "rho bracket table"),
    exact("bracket.n0=9", "3.0659", "rho bracket table"),
    exact("bracket.n0=10", "3.0794", "rho bracket table"),
    exact("bracket.n0=20", "3.1235", "rho bracket table"),
    exact("bracket.n0=30", "3.1328", "rho bracket table"),
    exact("bracket.n0=40", "3.1362", "rho bracket table"),
    exact("bracket.n0=50", "3.1378", "rho bracket table"),
    exact("bracket.n0=60", "3.1387", "rho bracket table"),
    exact("bracket.n0=70", "3.1393", "rho bracket table"),
    exact("bracket.n0=80", "3.1396", "rho bracket table"),
    exact("bracket.n0=90", "3.1399", "rho bracket table"),
];

pub enum Computed {
    Real(BigReal),
    Exact(String),
}

fn sig_digits(s: &str) -> usize {
    s.chars().filter(|c| c.is_ascii_digit()).skip_while(|c| *c == '0').count()
}

/// Rows for the computed keys that have a printed counterpart.
pub fn compare(computed: &[(String, Computed)], digits: u32) -> Vec<Value> {
    let mut out = Vec::new();
    for (key, val) in computed {
        let Some(e) = TABLE.iter().find(|e| e.key == key) else { continue };
        let row = match (&e.value, val) {
            (Printed::Real(p), Computed::Real(x)) => {
                let printed = BigReal::parse(p, x.prec()).expect("table entry parses");
                let agree = x.agreement_digits(&printed);
                let want = (sig_digits(p) as f64 - 1.0).min(digits as f64);
                json!({
                    "key": key,
                    "source": e.source,
                    "printed": p,
                    "computed": x.to_decimal(sig_digits(p) + 2),
                    "agreement_digits": format!("{agree:.1}"),
                    "pass": agree >= want,
                })
            }
            (Printed::Exact(p), Computed::Exact(s)) => json!({
                "key": key,
                "source": e.source,
                "printed": p,
                "computed": s,
                "pass": p == s,
            }),
            _ => continue,
        };
        out.push(row);
    }
    out
}
