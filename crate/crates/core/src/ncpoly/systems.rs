//! Named generator sets over the standard alphabet `a < b < c < u < v < t`.

use crate::exactnum::Rat;

use super::{Alphabet, NcPoly};

fn parse_all(texts: &[&str]) -> Vec<NcPoly<Rat>> {
    let al = Alphabet::standard();
    texts.iter().map(|t| al.parse(t).expect("preset parses")).collect()
}

fn commutators(with: &str) -> Vec<String> {
    ["a", "b", "c"].iter().map(|x| format!("{x}.{with} - {with}.{x}")).collect()
}

fn build(base: &[&str], extra: Vec<String>) -> Vec<NcPoly<Rat>> {
    let mut all: Vec<&str> = base.to_vec();
    all.extend(extra.iter().map(String::as_str));
    parse_all(&all)
}

/// `a+b+c`, `a²+b²+c²`, `a³+b³+c³`.
pub fn s4() -> Vec<NcPoly<Rat>> {
    parse_all(&["a + b + c", "a.a + b.b + c.c", "a.a.a + b.b.b + c.c.c"])
}

/// Power sums `0, u², 0` with `a, b, c` commuting with `u`.
pub fn s2() -> Vec<NcPoly<Rat>> {
    build(&["a + b + c", "a.a + b.b + c.c - u.u", "a.a.a + b.b.b + c.c.c"], commutators("u"))
}

/// Sum zero, squares `2u²`, each cube equal to `x u²`, all commuting with `u`.
pub fn s3() -> Vec<NcPoly<Rat>> {
    build(
        &["a + b + c", "a.a + b.b + c.c - 2*u.u", "a.a.a - a.u.u", "b.b.b - b.u.u", "c.c.c - c.u.u"],
        commutators("u"),
    )
}

/// Power sums `0, u², v³` with `a, b, c` commuting with `u²` and `v³`.
pub fn s21() -> Vec<NcPoly<Rat>> {
    let mut extra = commutators("u.u");
    extra.extend(commutators("v.v.v"));
    extra.push("u.u.v.v.v - v.v.v.u.u".into());
    build(&["a + b + c", "a.a + b.b + c.c - u.u", "a.a.a + b.b.b + c.c.c - v.v.v"], extra)
}

/// As [`s21`] but only commuting with `v³`.
pub fn s21_v_only() -> Vec<NcPoly<Rat>> {
    let mut extra = commutators("v.v.v");
    extra.push("u.u.v.v.v - v.v.v.u.u".into());
    build(&["a + b + c", "a.a + b.b + c.c - u.u", "a.a.a + b.b.b + c.c.c - v.v.v"], extra)
}

/// Homogenization of `ab = c, bc = a, ca = b` by a central `t`.
pub fn remark121() -> Vec<NcPoly<Rat>> {
    parse_all(&["a.b - c.t", "b.c - a.t", "c.a - b.t", "a.t - t.a", "b.t - t.b", "c.t - t.c"])
}

/// Looks up a preset by its CLI name.
pub fn preset(name: &str) -> Option<Vec<NcPoly<Rat>>> {
    match name {
        "s4" => Some(s4()),
        "s3" => Some(s3()),
        "s2" => Some(s2()),
        "s21" => Some(s21()),
        "s21v" => Some(s21_v_only()),
        "remark121" => Some(remark121()),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 6] = ["s4", "s3", "s2", "s21", "s21v", "remark121"];
