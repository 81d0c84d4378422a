use std::fmt;

use certkernel_core::Lit;

use crate::bv::BvPayload;
use crate::euf::EufPayload;
use crate::lia::LiaPayload;
use crate::res::CnfPayload;

/// Index into the clause store. Input clauses occupy `0..k`, certificate
/// steps continue from `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseId(pub u32);

impl ClauseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Tseitin-style clausification lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CnfKind {
    AndPos,
    AndNeg,
    OrPos,
    OrNeg,
    ImpPos,
    ImpNeg1,
    ImpNeg2,
    XorPos1,
    XorPos2,
    XorNeg1,
    XorNeg2,
    ItePos1,
    ItePos2,
    IteNeg1,
    IteNeg2,
    EquivPos1,
    EquivPos2,
    EquivNeg1,
    EquivNeg2,
    NotNot,
    /// `[pos true]`
    ConstTrue,
    /// `[neg false]`
    ConstFalse,
}

impl CnfKind {
    pub const ALL: [CnfKind; 22] = [
        CnfKind::AndPos,
        CnfKind::AndNeg,
        CnfKind::OrPos,
        CnfKind::OrNeg,
        CnfKind::ImpPos,
        CnfKind::ImpNeg1,
        CnfKind::ImpNeg2,
        CnfKind::XorPos1,
        CnfKind::XorPos2,
        CnfKind::XorNeg1,
        CnfKind::XorNeg2,
        CnfKind::ItePos1,
        CnfKind::ItePos2,
        CnfKind::IteNeg1,
        CnfKind::IteNeg2,
        CnfKind::EquivPos1,
        CnfKind::EquivPos2,
        CnfKind::EquivNeg1,
        CnfKind::EquivNeg2,
        CnfKind::NotNot,
        CnfKind::ConstTrue,
        CnfKind::ConstFalse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CnfKind::AndPos => "and_pos",
            CnfKind::AndNeg => "and_neg",
            CnfKind::OrPos => "or_pos",
            CnfKind::OrNeg => "or_neg",
            CnfKind::ImpPos => "imp_pos",
            CnfKind::ImpNeg1 => "imp_neg1",
            CnfKind::ImpNeg2 => "imp_neg2",
            CnfKind::XorPos1 => "xor_pos1",
            CnfKind::XorPos2 => "xor_pos2",
            CnfKind::XorNeg1 => "xor_neg1",
            CnfKind::XorNeg2 => "xor_neg2",
            CnfKind::ItePos1 => "ite_pos1",
            CnfKind::ItePos2 => "ite_pos2",
            CnfKind::IteNeg1 => "ite_neg1",
            CnfKind::IteNeg2 => "ite_neg2",
            CnfKind::EquivPos1 => "equiv_pos1",
            CnfKind::EquivPos2 => "equiv_pos2",
            CnfKind::EquivNeg1 => "equiv_neg1",
            CnfKind::EquivNeg2 => "equiv_neg2",
            CnfKind::NotNot => "not_not",
            CnfKind::ConstTrue => "true",
            CnfKind::ConstFalse => "false",
        }
    }

    /// Kinds whose payload carries an argument index.
    pub fn takes_index(self) -> bool {
        matches!(self, CnfKind::AndPos | CnfKind::OrNeg | CnfKind::NotNot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BitOp {
    And,
    Or,
    Xor,
}

/// The closed set of rules a step may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    /// Only used for statistics: clauses given as input.
    Input,
    Res,
    Cnf(CnfKind),
    Euf,
    Lia,
    BbVar,
    BbConst,
    BbNot,
    BbBitwise(BitOp),
    BbAdd,
    BbEq,
    BbUlt,
    Assume,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Input => "input",
            RuleKind::Res => "res",
            RuleKind::Cnf(k) => k.name(),
            RuleKind::Euf => "euf",
            RuleKind::Lia => "lia",
            RuleKind::BbVar => "bb_var",
            RuleKind::BbConst => "bb_const",
            RuleKind::BbNot => "bb_not",
            RuleKind::BbBitwise(BitOp::And) => "bb_and",
            RuleKind::BbBitwise(BitOp::Or) => "bb_or",
            RuleKind::BbBitwise(BitOp::Xor) => "bb_xor",
            RuleKind::BbAdd => "bb_add",
            RuleKind::BbEq => "bb_eq",
            RuleKind::BbUlt => "bb_ult",
            RuleKind::Assume => "assume",
        }
    }

    /// Parses a certificate rule name. `input` is not a certificate rule.
    pub fn from_name(name: &str) -> Option<RuleKind> {
        let rule = match name {
            "res" => RuleKind::Res,
            "euf" => RuleKind::Euf,
            "lia" => RuleKind::Lia,
            "bb_var" => RuleKind::BbVar,
            "bb_const" => RuleKind::BbConst,
            "bb_not" => RuleKind::BbNot,
            "bb_and" => RuleKind::BbBitwise(BitOp::And),
            "bb_or" => RuleKind::BbBitwise(BitOp::Or),
            "bb_xor" => RuleKind::BbBitwise(BitOp::Xor),
            "bb_add" => RuleKind::BbAdd,
            "bb_eq" => RuleKind::BbEq,
            "bb_ult" => RuleKind::BbUlt,
            "assume" => RuleKind::Assume,
            other => RuleKind::Cnf(CnfKind::ALL.into_iter().find(|k| k.name() == other)?),
        };
        Some(rule)
    }

    pub fn is_bitblast(self) -> bool {
        matches!(
            self,
            RuleKind::BbVar
                | RuleKind::BbConst
                | RuleKind::BbNot
                | RuleKind::BbBitwise(_)
                | RuleKind::BbAdd
                | RuleKind::BbEq
                | RuleKind::BbUlt
        )
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule-specific piece of the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    None,
    Cnf(CnfPayload),
    Euf(EufPayload),
    Lia(LiaPayload),
    Bv(BvPayload),
    /// The clause taken on trust by an `assume` step, literals as written.
    Clause(Vec<Lit>),
}

impl Payload {
    pub fn matches(&self, rule: RuleKind) -> bool {
        match (rule, self) {
            (RuleKind::Res, Payload::None) => true,
            (RuleKind::Cnf(_), Payload::Cnf(_)) => true,
            (RuleKind::Euf, Payload::Euf(_)) => true,
            (RuleKind::Lia, Payload::Lia(_)) => true,
            (RuleKind::Assume, Payload::Clause(_)) => true,
            (r, Payload::Bv(_)) => r.is_bitblast(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub id: ClauseId,
    pub rule: RuleKind,
    pub premises: Vec<ClauseId>,
    pub payload: Payload,
}

/// A linear certificate. The goal is always the empty clause; `qed` names the
/// step the producer claims derives it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    pub steps: Vec<Step>,
    pub qed: Option<ClauseId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_names_round_trip() {
        let names = [
            "res",
            "and_pos",
            "and_neg",
            "or_pos",
            "or_neg",
            "imp_pos",
            "imp_neg1",
            "imp_neg2",
            "xor_pos1",
            "xor_pos2",
            "xor_neg1",
            "xor_neg2",
            "ite_pos1",
            "ite_pos2",
            "ite_neg1",
            "ite_neg2",
            "equiv_pos1",
            "equiv_pos2",
            "equiv_neg1",
            "equiv_neg2",
            "not_not",
            "euf",
            "lia",
            "bb_var",
            "bb_const",
            "bb_not",
            "bb_and",
            "bb_or",
            "bb_xor",
            "bb_add",
            "bb_eq",
            "bb_ult",
            "assume",
        ];
        for n in names {
            assert_eq!(RuleKind::from_name(n).unwrap().name(), n);
        }
        assert_eq!(RuleKind::from_name("input"), None);
        assert_eq!(RuleKind::from_name("drat"), None);
    }

    #[test]
    fn payload_agreement() {
        assert!(Payload::None.matches(RuleKind::Res));
        assert!(!Payload::None.matches(RuleKind::Euf));
        assert!(!Payload::Clause(vec![]).matches(RuleKind::Res));
    }
}
