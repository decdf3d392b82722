//! Reduced words in the free group `F_d` on the generators `a_1, …, a_d`.
//!
//! A [`Word`] is a sequence of signed generator indices (`+i` is `a_i`,
//! `-i` is `a_i^{-1}`) that never contains an adjacent pair `x, -x`. Every
//! public constructor reduces, so a `Word` value is always the canonical
//! representative of a group element and its length is the word length.
//!
//! Letters are ordered `1 < -1 < 2 < -2 < …`; spheres are enumerated
//! lexicographically in that order.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported rank.
pub const MAX_RANK: usize = 16;
/// Default cap on enumeration radius.
pub const DEFAULT_RADIUS_CAP: usize = 20;
/// Default memory budget for sparse objects, in MiB.
pub const DEFAULT_CAP_MB: usize = 1024;
/// Rough footprint of one stored term (word + coefficient + map overhead).
pub const BYTES_PER_TERM: usize = 96;

/// Size caps guarding the exponential-size parts of the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest sphere radius that may be enumerated.
    pub radius_cap: usize,
    /// Largest number of terms a sparse object (or enumeration) may hold.
    pub term_cap: usize,
}

impl Limits {
    pub fn from_megabytes(mb: usize) -> Self {
        Limits {
            radius_cap: DEFAULT_RADIUS_CAP,
            term_cap: mb.saturating_mul(1 << 20) / BYTES_PER_TERM,
        }
    }

    /// Reads `FREEHARM_CAP_MB`, falling back to the default budget.
    pub fn from_env() -> Self {
        let mb = std::env::var("FREEHARM_CAP_MB")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .unwrap_or(DEFAULT_CAP_MB);
        Self::from_megabytes(mb)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::from_megabytes(DEFAULT_CAP_MB)
    }
}

/// The free group of rank `d` together with the caps used for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupContext {
    rank: usize,
    limits: Limits,
}

impl GroupContext {
    pub fn new(d: usize) -> Result<Self> {
        if !(2..=MAX_RANK).contains(&d) {
            return Err(Error::domain(format!(
                "rank d = {d} outside supported range 2..={MAX_RANK}"
            )));
        }
        Ok(GroupContext {
            rank: d,
            limits: Limits::from_env(),
        })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_radius_cap(mut self, radius_cap: usize) -> Self {
        self.limits.radius_cap = radius_cap;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// `2d - 1`, the branching number of the Cayley tree.
    pub fn branching(&self) -> usize {
        2 * self.rank - 1
    }

    /// All `2d` letters in lexicographic order `1, -1, 2, -2, …`.
    pub fn letters(&self) -> impl Iterator<Item = i8> + Clone {
        (1..=self.rank as i8).flat_map(|i| [i, -i])
    }

    pub fn check_letter(&self, letter: i64) -> Result<i8> {
        if letter == 0 || letter.unsigned_abs() as usize > self.rank {
            return Err(Error::InvalidLetter {
                letter,
                rank: self.rank,
            });
        }
        Ok(letter as i8)
    }

    /// `|W_k|`, saturating at `u128::MAX`.
    pub fn sphere_size(&self, k: usize) -> u128 {
        if k == 0 {
            return 1;
        }
        let b = self.branching() as u128;
        let mut n = 2 * self.rank as u128;
        for _ in 1..k {
            n = n.saturating_mul(b);
        }
        n
    }

    /// `ln |W_k|` without overflow.
    pub fn ln_sphere_size(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            (2.0 * self.rank as f64).ln() + (k - 1) as f64 * (self.branching() as f64).ln()
        }
    }

    /// Number of words of length at most `r`, saturating.
    pub fn ball_size(&self, r: usize) -> u128 {
        (0..=r).fold(0u128, |acc, k| acc.saturating_add(self.sphere_size(k)))
    }

    fn check_enumeration(&self, k: usize, count: u128) -> Result<()> {
        if k > self.limits.radius_cap {
            return Err(Error::resource(format!(
                "radius {k} exceeds enumeration cap {}",
                self.limits.radius_cap
            )));
        }
        if count > self.limits.term_cap as u128 {
            return Err(Error::resource(format!(
                "{count} words exceed the term cap {} (raise FREEHARM_CAP_MB)",
                self.limits.term_cap
            )));
        }
        Ok(())
    }
}

/// A reduced word. The empty word is the identity `e`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i8>);

fn letter_key(x: i8) -> u8 {
    2 * (x.unsigned_abs() - 1) + u8::from(x < 0)
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The generator `a_i` (or its inverse for negative `i`).
    pub fn generator(ctx: &GroupContext, letter: i64) -> Result<Self> {
        Ok(Word(vec![ctx.check_letter(letter)?]))
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(ctx: &GroupContext, raw: &[i64]) -> Result<Self> {
        let mut out: Vec<i8> = Vec::with_capacity(raw.len());
        for &x in raw {
            let x = ctx.check_letter(x)?;
            match out.last() {
                Some(&last) if last == -x => {
                    out.pop();
                }
                _ => out.push(x),
            }
        }
        Ok(Word(out))
    }

    /// Parses the text form: `a, b, c, …` for generators and `A, B, C, …`
    /// for their inverses. `""`, `"1"` and `"e"` (when `d < 5`) denote the
    /// identity.
    pub fn parse(ctx: &GroupContext, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "1" || (text == "e" && ctx.rank() < 5) {
            return Ok(Word::identity());
        }
        let mut raw = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            let letter = match ch {
                'a'..='z' => (ch as i64) - ('a' as i64) + 1,
                'A'..='Z' => -((ch as i64) - ('A' as i64) + 1),
                _ => {
                    return Err(Error::Parse {
                        location: format!("character {pos}"),
                        message: format!("unexpected character {ch:?} in word"),
                    })
                }
            };
            raw.push(letter);
        }
        Word::reduce(ctx, &raw)
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }

    /// Word length `|w|`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of letters that cancel when forming `self · rhs`.
    pub fn cancellation_depth(&self, rhs: &Word) -> usize {
        let (a, b) = (&self.0, &rhs.0);
        let mut j = 0;
        while j < a.len() && j < b.len() && a[a.len() - 1 - j] == -b[j] {
            j += 1;
        }
        j
    }

    /// The reduced product `self · rhs`.
    pub fn mul(&self, rhs: &Word) -> Word {
        let j = self.cancellation_depth(rhs);
        let mut v = Vec::with_capacity(self.len() + rhs.len() - 2 * j);
        v.extend_from_slice(&self.0[..self.len() - j]);
        v.extend_from_slice(&rhs.0[j..]);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| -x).collect())
    }

    /// First `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Everything after the first `n` letters.
    pub fn suffix_after(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1]
    }

    /// Strips matching first/last letters until the word is cyclically
    /// reduced; the result is a shortest word in the conjugacy class.
    pub fn cyclic_reduce(&self) -> Word {
        let s = &self.0;
        let (mut lo, mut hi) = (0usize, s.len());
        while hi - lo >= 2 && s[lo] == -s[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(s[lo..hi].to_vec())
    }

    /// Conjugacy test: cyclic reductions agree up to rotation.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        let a = self.cyclic_reduce();
        let b = other.cyclic_reduce();
        is_rotation(&a.0, &b.0)
    }
}

fn is_rotation(a: &[i8], b: &[i8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    if n == 0 {
        return true;
    }
    (0..n).any(|r| (0..n).all(|i| a[(i + r) % n] == b[i]))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.0
                .iter()
                .map(|&x| letter_key(x))
                .cmp(other.0.iter().map(|&x| letter_key(x)))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &x in &self.0 {
            let base = if x > 0 { b'a' } else { b'A' };
            let ch = (base + x.unsigned_abs() - 1) as char;
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Serialized as the signed letter sequence, e.g. `[1, -2]`.
impl Serialize for Word {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.to_signed())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// `s · t`.
pub fn multiply(s: &Word, t: &Word) -> Word {
    s.mul(t)
}

/// `s^{-1}`.
pub fn invert(s: &Word) -> Word {
    s.inverse()
}

/// `reduce` on a raw signed sequence.
pub fn reduce(ctx: &GroupContext, raw: &[i64]) -> Result<Word> {
    Word::reduce(ctx, raw)
}

/// Shortest conjugate of `s`.
pub fn cyclic_reduce(s: &Word) -> Word {
    s.cyclic_reduce()
}

fn extend_sphere(ctx: &GroupContext, prefix: &mut Vec<i8>, remaining: usize, out: &mut Vec<Word>) {
    if remaining == 0 {
        out.push(Word(prefix.clone()));
        return;
    }
    let last = prefix.last().copied();
    for x in ctx.letters() {
        if Some(-x) == last {
            continue;
        }
        prefix.push(x);
        extend_sphere(ctx, prefix, remaining - 1, out);
        prefix.pop();
    }
}

/// All words of length exactly `k`, in lexicographic order.
pub fn enumerate_sphere(ctx: &GroupContext, k: usize) -> Result<Vec<Word>> {
    ctx.check_enumeration(k, ctx.sphere_size(k))?;
    let mut out = Vec::with_capacity(ctx.sphere_size(k) as usize);
    extend_sphere(ctx, &mut Vec::with_capacity(k), k, &mut out);
    Ok(out)
}

/// The sphere `W_k` split by first letter; chunks can be consumed in any
/// order and concatenate to [`enumerate_sphere`].
pub fn enumerate_sphere_chunks(ctx: &GroupContext, k: usize) -> Result<Vec<Vec<Word>>> {
    ctx.check_enumeration(k, ctx.sphere_size(k))?;
    if k == 0 {
        return Ok(vec![vec![Word::identity()]]);
    }
    Ok(ctx
        .letters()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| {
            let mut out = Vec::new();
            extend_sphere(ctx, &mut vec![x], k - 1, &mut out);
            out
        })
        .collect())
}

/// All words of length at most `r`, ordered by length then lexicographically.
pub fn enumerate_ball(ctx: &GroupContext, r: usize) -> Result<Vec<Word>> {
    ctx.check_enumeration(r, ctx.ball_size(r))?;
    let mut out = Vec::with_capacity(ctx.ball_size(r) as usize);
    for k in 0..=r {
        extend_sphere(ctx, &mut Vec::with_capacity(k), k, &mut out);
    }
    Ok(out)
}

/// `|W_{k+2n} ∩ K|` where `K` is the conjugacy class of the cyclically
/// reduced word `w` of length `k`, by exhaustive enumeration.
pub fn conjugacy_sphere_count(ctx: &GroupContext, w: &Word, n: usize) -> Result<u64> {
    if w.is_identity() {
        return Err(Error::precondition(
            "the conjugacy class of the identity is excluded",
        ));
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::precondition(format!(
            "{w} is not cyclically reduced"
        )));
    }
    let chunks = enumerate_sphere_chunks(ctx, w.len() + 2 * n)?;
    Ok(chunks
        .par_iter()
        .map(|chunk| chunk.iter().filter(|s| s.is_conjugate_to(w)).count() as u64)
        .sum())
}
