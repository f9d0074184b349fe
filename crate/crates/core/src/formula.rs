//! Abstract syntax of PLDL, structural metadata and source-to-source rewrites.

use std::collections::{BTreeMap, BTreeSet};

use crate::Error;

/// Boolean combination of atomic propositions. Used as a letter-consuming regex atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropFormula {
    True,
    False,
    Atom(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(p: &str) -> Self {
        PropFormula::Atom(p.to_string())
    }

    pub fn negated(a: PropFormula) -> Self {
        PropFormula::Not(Box::new(a))
    }

    pub fn and(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Or(Box::new(a), Box::new(b))
    }

    /// Evaluates against a letter given as a membership predicate.
    pub fn eval_with(&self, has: &dyn Fn(&str) -> bool) -> bool {
        match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Atom(p) => has(p),
            PropFormula::Not(a) => !a.eval_with(has),
            PropFormula::And(a, b) => a.eval_with(has) && b.eval_with(has),
            PropFormula::Or(a, b) => a.eval_with(has) || b.eval_with(has),
        }
    }

    /// `A ⊨ φ` for a proposition set `A`.
    pub fn holds_in(&self, letter: &BTreeSet<String>) -> bool {
        self.eval_with(&|p| letter.contains(p))
    }

    pub fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Atom(p) => {
                out.insert(p.clone());
            }
            PropFormula::Not(a) => a.collect_props(out),
            PropFormula::And(a, b) | PropFormula::Or(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    /// Negation-normal-form formula with the same truth table.
    pub fn to_formula(&self) -> Formula {
        fn go(p: &PropFormula, positive: bool) -> Formula {
            match (p, positive) {
                (PropFormula::True, true) | (PropFormula::False, false) => Formula::True,
                (PropFormula::True, false) | (PropFormula::False, true) => Formula::False,
                (PropFormula::Atom(a), true) => Formula::Atom(a.clone()),
                (PropFormula::Atom(a), false) => Formula::NegAtom(a.clone()),
                (PropFormula::Not(a), s) => go(a, !s),
                (PropFormula::And(a, b), true) => Formula::and(go(a, true), go(b, true)),
                (PropFormula::And(a, b), false) => Formula::or(go(a, false), go(b, false)),
                (PropFormula::Or(a, b), true) => Formula::or(go(a, true), go(b, true)),
                (PropFormula::Or(a, b), false) => Formula::and(go(a, false), go(b, false)),
            }
        }
        go(self, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    /// Consumes one letter satisfying the propositional formula.
    Prop(PropFormula),
    /// Consumes nothing; holds where the formula holds.
    Test(Box<Formula>),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn prop(p: PropFormula) -> Self {
        Regex::Prop(p)
    }

    pub fn atom(p: &str) -> Self {
        Regex::Prop(PropFormula::atom(p))
    }

    pub fn tt() -> Self {
        Regex::Prop(PropFormula::True)
    }

    pub fn test(f: Formula) -> Self {
        Regex::Test(Box::new(f))
    }

    pub fn union(a: Regex, b: Regex) -> Self {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Regex, b: Regex) -> Self {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Self {
        Regex::Star(Box::new(a))
    }

    /// Number of regex nodes.
    pub fn length(&self) -> usize {
        match self {
            Regex::Prop(_) | Regex::Test(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.length() + b.length(),
            Regex::Star(a) => 1 + a.length(),
        }
    }

    /// Tests in left-to-right order.
    pub fn tests(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(r: &'a Regex, out: &mut Vec<&'a Formula>) {
            match r {
                Regex::Prop(_) => {}
                Regex::Test(f) => out.push(f),
                Regex::Union(a, b) | Regex::Concat(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Regex::Star(a) => go(a, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Applies `f` to every test formula.
    pub fn map_tests(&self, f: &mut dyn FnMut(&Formula) -> Formula) -> Regex {
        match self {
            Regex::Prop(p) => Regex::Prop(p.clone()),
            Regex::Test(t) => Regex::test(f(t)),
            Regex::Union(a, b) => Regex::union(a.map_tests(f), b.map_tests(f)),
            Regex::Concat(a, b) => Regex::concat(a.map_tests(f), b.map_tests(f)),
            Regex::Star(a) => Regex::star(a.map_tests(f)),
        }
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Regex::Prop(p) => p.collect_props(out),
            Regex::Test(t) => t.collect_props(out),
            Regex::Union(a, b) | Regex::Concat(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            Regex::Star(a) => a.collect_props(out),
        }
    }
}

/// A PLDL or LDL_cp formula in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    NegAtom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Diamond(Regex, Box<Formula>),
    Box(Regex, Box<Formula>),
    DiamondLe(Regex, String, Box<Formula>),
    BoxLe(Regex, String, Box<Formula>),
    DiamondCp(Regex, Box<Formula>),
    BoxCp(Regex, Box<Formula>),
}

/// Fragment classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentTag {
    Ldl,
    PldlDiamond,
    PldlBox,
    WellFormed,
    NotWellFormed,
}

impl FragmentTag {
    pub fn name(self) -> &'static str {
        match self {
            FragmentTag::Ldl => "ldl",
            FragmentTag::PldlDiamond => "pldl-diamond",
            FragmentTag::PldlBox => "pldl-box",
            FragmentTag::WellFormed => "well-formed",
            FragmentTag::NotWellFormed => "not-well-formed",
        }
    }
}

impl Formula {
    pub fn atom(p: &str) -> Self {
        Formula::Atom(p.to_string())
    }

    pub fn neg_atom(p: &str) -> Self {
        Formula::NegAtom(p.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn diamond(r: Regex, f: Formula) -> Self {
        Formula::Diamond(r, Box::new(f))
    }

    pub fn boxed(r: Regex, f: Formula) -> Self {
        Formula::Box(r, Box::new(f))
    }

    pub fn diamond_le(r: Regex, x: &str, f: Formula) -> Self {
        Formula::DiamondLe(r, x.to_string(), Box::new(f))
    }

    pub fn box_le(r: Regex, y: &str, f: Formula) -> Self {
        Formula::BoxLe(r, y.to_string(), Box::new(f))
    }

    pub fn diamond_cp(r: Regex, f: Formula) -> Self {
        Formula::DiamondCp(r, Box::new(f))
    }

    pub fn box_cp(r: Regex, f: Formula) -> Self {
        Formula::BoxCp(r, Box::new(f))
    }

    /// Conjunction of a non-empty list, left-nested.
    pub fn all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// `[tt*]<tt*> l`: the literal holds infinitely often.
    pub fn infinitely_often(l: Formula) -> Formula {
        Formula::boxed(
            Regex::star(Regex::tt()),
            Formula::diamond(Regex::star(Regex::tt()), l),
        )
    }

    /// Direct children: operands and test formulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => vec![],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
            Formula::Diamond(r, f)
            | Formula::Box(r, f)
            | Formula::DiamondLe(r, _, f)
            | Formula::BoxLe(r, _, f)
            | Formula::DiamondCp(r, f)
            | Formula::BoxCp(r, f) => {
                let mut v = r.tests();
                v.push(f);
                v
            }
        }
    }

    pub fn regex(&self) -> Option<&Regex> {
        match self {
            Formula::Diamond(r, _)
            | Formula::Box(r, _)
            | Formula::DiamondLe(r, _, _)
            | Formula::BoxLe(r, _, _)
            | Formula::DiamondCp(r, _)
            | Formula::BoxCp(r, _) => Some(r),
            _ => None,
        }
    }

    /// Propositional view, if the formula is a boolean combination of literals.
    pub fn as_prop(&self) -> Option<PropFormula> {
        Some(match self {
            Formula::True => PropFormula::True,
            Formula::False => PropFormula::False,
            Formula::Atom(p) => PropFormula::atom(p),
            Formula::NegAtom(p) => PropFormula::negated(PropFormula::atom(p)),
            Formula::And(a, b) => PropFormula::and(a.as_prop()?, b.as_prop()?),
            Formula::Or(a, b) => PropFormula::or(a.as_prop()?, b.as_prop()?),
            _ => return None,
        })
    }

    /// Dual formula with negation pushed to the atoms. Tests are left untouched.
    pub fn negate(&self) -> Formula {
        let n = |f: &Formula| Box::new(f.negate());
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(p) => Formula::NegAtom(p.clone()),
            Formula::NegAtom(p) => Formula::Atom(p.clone()),
            Formula::And(a, b) => Formula::Or(n(a), n(b)),
            Formula::Or(a, b) => Formula::And(n(a), n(b)),
            Formula::Diamond(r, f) => Formula::Box(r.clone(), n(f)),
            Formula::Box(r, f) => Formula::Diamond(r.clone(), n(f)),
            Formula::DiamondLe(r, x, f) => Formula::BoxLe(r.clone(), x.clone(), n(f)),
            Formula::BoxLe(r, y, f) => Formula::DiamondLe(r.clone(), y.clone(), n(f)),
            Formula::DiamondCp(r, f) => Formula::BoxCp(r.clone(), n(f)),
            Formula::BoxCp(r, f) => Formula::DiamondCp(r.clone(), n(f)),
        }
    }

    /// All subformulas, including the formula itself and those inside tests.
    pub fn closure(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        fn go(f: &Formula, out: &mut BTreeSet<Formula>) {
            if out.insert(f.clone()) {
                for c in f.children() {
                    go(c, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// `|cl(φ)|` plus the node counts of all regex occurrences. The constants
    /// `tt` and `ff` weigh nothing.
    pub fn size(&self) -> usize {
        let cl = self.closure().iter().filter(|g| !matches!(g, Formula::True | Formula::False)).count();
        let mut re = 0;
        self.visit(&mut |g| re += g.regex().map_or(0, Regex::length));
        cl + re
    }

    /// Like [`Formula::size`], but counting subformula occurrences rather
    /// than distinct subformulas.
    pub fn tree_size(&self) -> usize {
        let own = match self {
            Formula::True | Formula::False => 0,
            _ => 1,
        };
        let re = self.regex().map_or(0, Regex::length);
        own + re + self.children().iter().map(|c| c.tree_size()).sum::<usize>()
    }

    /// `(diamond variables, box variables)` over the closure.
    pub fn variables(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut d = BTreeSet::new();
        let mut b = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::DiamondLe(_, x, _) => {
                d.insert(x.clone());
            }
            Formula::BoxLe(_, y, _) => {
                b.insert(y.clone());
            }
            _ => {}
        });
        (d, b)
    }

    pub fn all_variables(&self) -> BTreeSet<String> {
        let (mut d, b) = self.variables();
        d.extend(b);
        d
    }

    pub fn is_variable_free(&self) -> bool {
        self.all_variables().is_empty()
    }

    pub fn has_changepoint_ops(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::DiamondCp(..) | Formula::BoxCp(..)) {
                found = true;
            }
        });
        found
    }

    /// Pre-order walk over every subformula occurrence, including tests.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) | Formula::NegAtom(p) => {
                out.insert(p.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            Formula::Diamond(r, f)
            | Formula::Box(r, f)
            | Formula::DiamondLe(r, _, f)
            | Formula::BoxLe(r, _, f)
            | Formula::DiamondCp(r, f)
            | Formula::BoxCp(r, f) => {
                r.collect_props(out);
                f.collect_props(out);
            }
        }
    }

    pub fn is_well_formed(&self) -> bool {
        let (d, b) = self.variables();
        d.is_disjoint(&b)
    }

    pub fn classify(&self) -> FragmentTag {
        let (d, b) = self.variables();
        if !d.is_disjoint(&b) {
            FragmentTag::NotWellFormed
        } else if d.is_empty() && b.is_empty() {
            FragmentTag::Ldl
        } else if b.is_empty() {
            FragmentTag::PldlDiamond
        } else if d.is_empty() && self.negate().variables().1.is_empty() {
            FragmentTag::PldlBox
        } else {
            FragmentTag::WellFormed
        }
    }

    pub fn is_pldl_diamond(&self) -> bool {
        matches!(self.classify(), FragmentTag::Ldl | FragmentTag::PldlDiamond)
    }

    pub fn is_pldl_box(&self) -> bool {
        matches!(self.classify(), FragmentTag::Ldl | FragmentTag::PldlBox)
    }

    /// True if no parameterized operator sits inside a test read by a box
    /// (at odd nesting depth of such tests). Only for these formulas is
    /// satisfaction monotone in the parameters.
    pub fn parameters_positive(&self) -> bool {
        fn go(f: &Formula, positive: bool) -> bool {
            let (r, body, universal) = match f {
                Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => {
                    return true
                }
                Formula::And(a, b) | Formula::Or(a, b) => {
                    return go(a, positive) && go(b, positive)
                }
                Formula::DiamondLe(..) | Formula::BoxLe(..) if !positive => return false,
                Formula::Diamond(r, b) | Formula::DiamondLe(r, _, b) | Formula::DiamondCp(r, b) => {
                    (r, b, false)
                }
                Formula::Box(r, b) | Formula::BoxLe(r, _, b) | Formula::BoxCp(r, b) => (r, b, true),
            };
            let test_pol = if universal { !positive } else { positive };
            go(body, positive) && r.tests().into_iter().all(|t| go(t, test_pol))
        }
        go(self, true)
    }

    /// Rebuilds one level, applying `f` to the body and to every test.
    pub fn map_children(&self, f: &mut dyn FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => self.clone(),
            Formula::And(a, b) => Formula::and(f(a), f(b)),
            Formula::Or(a, b) => Formula::or(f(a), f(b)),
            Formula::Diamond(r, b) => Formula::Diamond(r.map_tests(f), Box::new(f(b))),
            Formula::Box(r, b) => Formula::Box(r.map_tests(f), Box::new(f(b))),
            Formula::DiamondLe(r, x, b) => {
                Formula::DiamondLe(r.map_tests(f), x.clone(), Box::new(f(b)))
            }
            Formula::BoxLe(r, y, b) => Formula::BoxLe(r.map_tests(f), y.clone(), Box::new(f(b))),
            Formula::DiamondCp(r, b) => Formula::DiamondCp(r.map_tests(f), Box::new(f(b))),
            Formula::BoxCp(r, b) => Formula::BoxCp(r.map_tests(f), Box::new(f(b))),
        }
    }

    /// Maps every variable through `f`.
    pub fn rename_vars(&self, f: &dyn Fn(&str) -> String) -> Formula {
        match self {
            Formula::DiamondLe(r, x, b) => Formula::DiamondLe(
                r.map_tests(&mut |t| t.rename_vars(f)),
                f(x),
                Box::new(b.rename_vars(f)),
            ),
            Formula::BoxLe(r, y, b) => Formula::BoxLe(
                r.map_tests(&mut |t| t.rename_vars(f)),
                f(y),
                Box::new(b.rename_vars(f)),
            ),
            _ => self.map_children(&mut |c| c.rename_vars(f)),
        }
    }

    /// Replaces every parameterized box `[r]{<= y} ψ` with `[r̂] ψ`.
    pub fn eliminate_boxes(&self) -> Formula {
        self.hat_boxes(&|_| true)
    }

    fn hat_boxes(&self, pick: &dyn Fn(&str) -> bool) -> Formula {
        match self {
            Formula::BoxLe(r, y, b) if pick(y) => {
                let r = r.map_tests(&mut |t| t.hat_boxes(pick));
                Formula::Box(regex_hat(&r), Box::new(b.hat_boxes(pick)))
            }
            _ => self.map_children(&mut |c| c.hat_boxes(pick)),
        }
    }

    /// Every variable renamed to `z`. Requires a PLDL◇ or PLDL□ formula.
    pub fn rename_all_vars_to(&self, z: &str) -> Result<Formula, Error> {
        if !self.is_pldl_diamond() && !self.is_pldl_box() {
            return Err(Error::WrongFragment(
                "renaming needs a pldl-diamond or pldl-box formula".into(),
            ));
        }
        Ok(self.rename_vars(&|_| z.to_string()))
    }

    /// Keeps the box parameter `y` and hat-rewrites every other parameterized box.
    pub fn fix_all_but_one_box(&self, y: &str) -> Result<Formula, Error> {
        if !self.is_pldl_box() {
            return Err(Error::WrongFragment("expected a pldl-box formula".into()));
        }
        Ok(self.hat_boxes(&|v| v != y))
    }

    /// Replaces every `<r>{<= x} ψ` with `<rel(r)>{cp} rel(ψ)`, inside tests too.
    pub fn rel(&self) -> Formula {
        match self {
            Formula::DiamondLe(r, _, b) => {
                Formula::DiamondCp(r.map_tests(&mut |t| t.rel()), Box::new(b.rel()))
            }
            _ => self.map_children(&mut |c| c.rel()),
        }
    }

    /// `rel(φ) ∧ χ∞color ∧ χ∞¬color`.
    pub fn color_transform(&self, color: &str) -> Result<Formula, Error> {
        if !self.is_pldl_diamond() {
            return Err(Error::WrongFragment(
                "the alternating color technique needs a pldl-diamond formula".into(),
            ));
        }
        if self.props().contains(color) {
            return Err(Error::Invalid(format!(
                "color proposition {color} already occurs in the formula"
            )));
        }
        Ok(Formula::all([
            self.rel(),
            Formula::infinitely_often(Formula::atom(color)),
            Formula::infinitely_often(Formula::neg_atom(color)),
        ]))
    }
}

/// Single test with the same diagonal matches as `r`.
pub fn regex_hat(r: &Regex) -> Regex {
    fn drop_stars(r: &Regex) -> Regex {
        match r {
            Regex::Star(_) => Regex::test(Formula::True),
            Regex::Prop(_) | Regex::Test(_) => r.clone(),
            Regex::Union(a, b) => Regex::union(drop_stars(a), drop_stars(b)),
            Regex::Concat(a, b) => Regex::concat(drop_stars(a), drop_stars(b)),
        }
    }
    fn drop_props(r: &Regex) -> Regex {
        match r {
            Regex::Union(a, b) => {
                let (a, b) = (drop_props(a), drop_props(b));
                match (&a, &b) {
                    (Regex::Prop(_), _) => b,
                    (_, Regex::Prop(_)) => a,
                    _ => Regex::union(a, b),
                }
            }
            Regex::Concat(a, b) => {
                let (a, b) = (drop_props(a), drop_props(b));
                if matches!(a, Regex::Prop(_)) || matches!(b, Regex::Prop(_)) {
                    Regex::test(Formula::False)
                } else {
                    Regex::concat(a, b)
                }
            }
            _ => r.clone(),
        }
    }
    fn merge_tests(r: &Regex) -> Formula {
        match r {
            Regex::Test(t) => (**t).clone(),
            Regex::Union(a, b) => Formula::or(merge_tests(a), merge_tests(b)),
            Regex::Concat(a, b) => Formula::and(merge_tests(a), merge_tests(b)),
            Regex::Prop(_) | Regex::Star(_) => unreachable!("removed by earlier passes"),
        }
    }
    match drop_props(&drop_stars(r)) {
        Regex::Prop(_) => Regex::test(Formula::False),
        other => Regex::test(merge_tests(&other)),
    }
}

/// Variable valuation. Absent variables map to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation(BTreeMap<String, u64>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform<'a>(vars: impl IntoIterator<Item = &'a String>, k: u64) -> Self {
        Valuation(vars.into_iter().map(|v| (v.clone(), k)).collect())
    }

    pub fn with(mut self, var: &str, k: u64) -> Self {
        self.0.insert(var.to_string(), k);
        self
    }

    pub fn set(&mut self, var: &str, k: u64) {
        self.0.insert(var.to_string(), k);
    }

    pub fn get(&self, var: &str) -> u64 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &u64)> {
        self.0.iter()
    }

    pub fn max_value(&self) -> u64 {
        self.0.values().copied().max().unwrap_or(0)
    }
}

impl FromIterator<(String, u64)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (String, u64)>>(iter: T) -> Self {
        Valuation(iter.into_iter().collect())
    }
}
