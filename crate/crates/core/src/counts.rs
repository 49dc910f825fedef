//! Closed-form family sizes for any number of generators, and Dedekind
//! numbers.

use std::fmt;

use crate::error::{Error, Result};
use crate::saturation::OpSet;

/// Largest `n` accepted by [`dedekind_count`]. The pair count for `n = 6`
/// runs over the 7581 monotone functions of five variables and takes well
/// under a second; `n = 7` would need the full list for six variables
/// (about 7.8 million) and a quadratic pass over it.
pub const DEDEKIND_CAP: usize = 6;

/// Row of the operation tables: the unary operations in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    Identity,
    Interior,
    Closure,
    Complement,
    ClosureInterior,
    /// Complement together with closure or interior; all three choices
    /// generate the same algebra.
    WithComplement,
}

/// Column of the operation tables: the binary operations in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    Identity,
    Meet,
    Join,
    MeetJoin,
}

impl Row {
    pub const ALL: [Row; 6] = [
        Row::Identity,
        Row::Interior,
        Row::Closure,
        Row::Complement,
        Row::ClosureInterior,
        Row::WithComplement,
    ];

    pub fn of(ops: OpSet) -> Row {
        match (ops.use_k, ops.use_i, ops.use_c) {
            (false, false, false) => Row::Identity,
            (false, true, false) => Row::Interior,
            (true, false, false) => Row::Closure,
            (false, false, true) => Row::Complement,
            (true, true, false) => Row::ClosureInterior,
            _ => Row::WithComplement,
        }
    }

    /// The operation flags used to compute this row (`kc` for the last).
    pub fn ops(self) -> OpSet {
        let mut o = OpSet::IDENTITY;
        match self {
            Row::Identity => {}
            Row::Interior => o.use_i = true,
            Row::Closure => o.use_k = true,
            Row::Complement => o.use_c = true,
            Row::ClosureInterior => {
                o.use_k = true;
                o.use_i = true;
            }
            Row::WithComplement => {
                o.use_k = true;
                o.use_c = true;
            }
        }
        o
    }

    pub fn label(self) -> &'static str {
        match self {
            Row::Identity => "{I}",
            Row::Interior => "{i}",
            Row::Closure => "{k}",
            Row::Complement => "{c}",
            Row::ClosureInterior => "{i,k}",
            Row::WithComplement => "{i,c} = {k,c} = {i,k,c}",
        }
    }
}

impl Column {
    pub const ALL: [Column; 4] = [
        Column::Identity,
        Column::Meet,
        Column::Join,
        Column::MeetJoin,
    ];

    pub fn of(ops: OpSet) -> Column {
        match (ops.use_meet, ops.use_join) {
            (false, false) => Column::Identity,
            (true, false) => Column::Meet,
            (false, true) => Column::Join,
            (true, true) => Column::MeetJoin,
        }
    }

    pub fn ops(self) -> OpSet {
        let mut o = OpSet::IDENTITY;
        o.use_meet = matches!(self, Column::Meet | Column::MeetJoin);
        o.use_join = matches!(self, Column::Join | Column::MeetJoin);
        o
    }

    pub fn label(self) -> &'static str {
        match self {
            Column::Identity => "{I}",
            Column::Meet => "{^}",
            Column::Join => "{v}",
            Column::MeetJoin => "{^,v}",
        }
    }
}

/// Cell formula for `n >= 2` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    Linear(u32),
    PowMinusOne(u32),
    DoubleExp,
    Dedekind,
    Infinite,
}

impl Formula {
    pub fn of(row: Row, col: Column) -> Formula {
        use Column as C;
        use Formula::*;
        use Row as R;
        match (row, col) {
            (R::Identity, C::Identity) => Linear(1),
            (R::Identity, C::Meet | C::Join) => PowMinusOne(2),
            (R::Identity, C::MeetJoin) => Dedekind,
            (R::Interior | R::Closure | R::Complement, C::Identity) => Linear(2),
            (R::Interior, C::Meet) | (R::Closure, C::Join) => PowMinusOne(3),
            (R::Complement, _) => DoubleExp,
            (R::ClosureInterior, C::Identity) => Linear(7),
            (R::WithComplement, C::Identity) => Linear(14),
            _ => Infinite,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Linear(1) => f.write_str("n"),
            Formula::Linear(a) => write!(f, "{a}n"),
            Formula::PowMinusOne(b) => write!(f, "{b}^n-1"),
            Formula::DoubleExp => f.write_str("2^(2^n)"),
            Formula::Dedekind => f.write_str("D_n"),
            Formula::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(u128),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<u128> {
        match self {
            Count::Finite(v) => Some(v),
            Count::Infinite => None,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

/// One-generator values. Several cells that are infinite for two or more
/// generators are finite here.
fn single_generator(row: Row, col: Column) -> Count {
    use Column as C;
    use Row as R;
    let v = match (row, col) {
        (R::Identity, _) => 1,
        (R::Interior | R::Closure, _) => 2,
        (R::Complement, C::Identity) => 2,
        (R::Complement, _) => 4,
        (R::ClosureInterior, C::Identity) => 7,
        (R::ClosureInterior, C::Meet | C::Join) => 13,
        (R::ClosureInterior, C::MeetJoin) => 35,
        (R::WithComplement, C::Identity) => 14,
        (R::WithComplement, _) => return Count::Infinite,
    };
    Count::Finite(v)
}

fn overflow(n: usize) -> Error {
    Error::Range {
        what: "n",
        value: n,
        valid: "a value whose count fits in 128 bits".into(),
    }
}

/// Size of the algebra generated from `n` free sets by `ops`.
pub fn closed_form_counts(n: usize, ops: OpSet) -> Result<Count> {
    if n == 0 {
        return Err(Error::Range {
            what: "n",
            value: 0,
            valid: ">= 1".into(),
        });
    }
    let (row, col) = (Row::of(ops), Column::of(ops));
    if n == 1 {
        return Ok(single_generator(row, col));
    }
    let n32 = u32::try_from(n).map_err(|_| overflow(n))?;
    let value = match Formula::of(row, col) {
        Formula::Linear(a) => u128::from(a) * n as u128,
        Formula::PowMinusOne(b) => u128::from(b).checked_pow(n32).ok_or_else(|| overflow(n))? - 1,
        Formula::DoubleExp => {
            let e = 1u32
                .checked_shl(n32)
                .filter(|&e| e < 128)
                .ok_or_else(|| overflow(n))?;
            1u128 << e
        }
        Formula::Dedekind => dedekind_count(n)?,
        Formula::Infinite => return Ok(Count::Infinite),
    };
    Ok(Count::Finite(value))
}

/// Monotone Boolean functions of `n <= 5` variables as truth tables, bit
/// `x` holding the value at the input whose variables are the bits of `x`.
fn monotone_functions(n: usize) -> Vec<u32> {
    debug_assert!(n <= 5);
    let mut fs = vec![0u32, 1];
    for m in 0..n {
        let half = 1u32 << m;
        let mut next = Vec::new();
        for &lo in &fs {
            for &hi in &fs {
                if lo & !hi == 0 {
                    next.push(lo | hi << half);
                }
            }
        }
        fs = next;
    }
    fs
}

/// Monotone Boolean functions on `n` variables, including both constants.
pub fn monotone_count(n: usize) -> Result<u128> {
    if n > DEDEKIND_CAP {
        return Err(Error::Cap {
            what: "n (more than 6 variables would take hours)",
            requested: n,
            cap: DEDEKIND_CAP,
        });
    }
    if n == 0 {
        return Ok(2);
    }
    // a function of m+1 variables is a pair lo <= hi of functions of m
    let fs = monotone_functions(n - 1);
    let pairs: u128 = fs
        .iter()
        .map(|&lo| fs.iter().filter(|&&hi| lo & !hi == 0).count() as u128)
        .sum();
    Ok(pairs)
}

/// Elements of the free distributive lattice on `n` generators without
/// empty meet or join: monotone functions minus the two constants.
pub fn dedekind_count(n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::Range {
            what: "n",
            value: 0,
            valid: format!("1..={DEDEKIND_CAP}"),
        });
    }
    Ok(monotone_count(n)? - 2)
}
