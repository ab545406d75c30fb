use crate::lang::SWRLB;
use crate::reasoner::ReasonError;
use crate::term::{Iri, Literal, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Comparison {
    GreaterThan,
    GreaterThanOrEqual,
    LessThan,
    LessThanOrEqual,
    Equal,
    NotEqual,
}

impl Comparison {
    pub(crate) fn lookup(builtin: &Iri) -> Result<Self, ReasonError> {
        let name = builtin
            .expansion()
            .strip_prefix(SWRLB)
            .ok_or_else(|| ReasonError::UnknownBuiltin(builtin.to_string()))?;
        Ok(match name {
            "greaterThan" => Comparison::GreaterThan,
            "greaterThanOrEqual" => Comparison::GreaterThanOrEqual,
            "lessThan" => Comparison::LessThan,
            "lessThanOrEqual" => Comparison::LessThanOrEqual,
            "equal" => Comparison::Equal,
            "notEqual" => Comparison::NotEqual,
            _ => return Err(ReasonError::UnknownBuiltin(builtin.to_string())),
        })
    }

    fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Comparison::GreaterThan => a > b,
            Comparison::GreaterThanOrEqual => a >= b,
            Comparison::LessThan => a < b,
            Comparison::LessThanOrEqual => a <= b,
            Comparison::Equal => a == b,
            Comparison::NotEqual => a != b,
        }
    }
}

fn integer(builtin: &Iri, value: &Value) -> Result<i64, ReasonError> {
    match value {
        Value::Literal(Literal::Integer(i)) => Ok(*i),
        other => Err(ReasonError::TypeMismatch {
            builtin: builtin.to_string(),
            value: other.to_string(),
        }),
    }
}

pub(crate) fn compare(op: Comparison, builtin: &Iri, args: &[Value]) -> Result<bool, ReasonError> {
    let [a, b] = args else {
        return Err(ReasonError::BuiltinArity {
            builtin: builtin.to_string(),
            found: args.len(),
        });
    };
    Ok(op.holds(integer(builtin, a)?, integer(builtin, b)?))
}

/// Evaluates a `swrlb` comparison over ground integer arguments.
pub fn eval_builtin(builtin: &Iri, args: &[Value]) -> Result<bool, ReasonError> {
    compare(Comparison::lookup(builtin)?, builtin, args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::PrefixTable;

    fn b(name: &str) -> Iri {
        PrefixTable::default().resolve("swrlb", name).unwrap()
    }

    fn int(i: i64) -> Value {
        Value::Literal(Literal::Integer(i))
    }

    #[test]
    fn greater_than_is_strict() {
        assert!(eval_builtin(&b("greaterThan"), &[int(20), int(18)]).unwrap());
        assert!(!eval_builtin(&b("greaterThan"), &[int(18), int(18)]).unwrap());
        assert!(eval_builtin(&b("greaterThanOrEqual"), &[int(18), int(18)]).unwrap());
    }

    #[test]
    fn all_comparisons() {
        let cases = [
            ("lessThan", 1, 2, true),
            ("lessThan", 2, 2, false),
            ("lessThanOrEqual", 2, 2, true),
            ("lessThanOrEqual", 3, 2, false),
            ("equal", -5, -5, true),
            ("equal", 5, -5, false),
            ("notEqual", 5, -5, true),
            ("notEqual", 0, 0, false),
            ("greaterThanOrEqual", i64::MIN, i64::MAX, false),
        ];
        for (name, x, y, want) in cases {
            assert_eq!(eval_builtin(&b(name), &[int(x), int(y)]).unwrap(), want, "{name}({x}, {y})");
        }
    }

    #[test]
    fn non_integer_is_type_mismatch() {
        let err = eval_builtin(&b("greaterThan"), &[Value::Literal(Literal::String("abc".into())), int(18)]).unwrap_err();
        assert!(matches!(err, ReasonError::TypeMismatch { .. }));
        let ind = Value::Individual(PrefixTable::default().resolve_qname("a").unwrap());
        assert!(matches!(
            eval_builtin(&b("lessThan"), &[int(1), ind]),
            Err(ReasonError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn unknown_builtin_and_arity() {
        assert!(matches!(
            eval_builtin(&b("stringConcat"), &[int(1), int(2)]),
            Err(ReasonError::UnknownBuiltin(_))
        ));
        assert!(matches!(
            eval_builtin(&b("equal"), &[int(1), int(2), int(3)]),
            Err(ReasonError::BuiltinArity { found: 3, .. })
        ));
    }
}
