use std::fmt;

macro_rules! rule_tags {
    (
        core { $($cv:ident => $cn:literal,)* }
        aux { $($av:ident => $an:literal,)* }
    ) => {
        /// Names the rewrite rule applied by one machine step.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleTag {
            $($cv,)*
            $($av,)*
        }

        impl RuleTag {
            /// The ownership-and-borrowing rules proper.
            pub const CORE: &'static [RuleTag] = &[$(RuleTag::$cv,)*];
            /// Structural rules: heating, cooling, literals and control flow.
            pub const AUXILIARY: &'static [RuleTag] = &[$(RuleTag::$av,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(RuleTag::$cv => $cn,)*
                    $(RuleTag::$av => $an,)*
                }
            }
        }
    };
}

rule_tags! {
    core {
        DeclarationOfImmutableVariable => "Declaration-of-Immutable-Variable",
        DeclarationOfMutableVariable => "Declaration-of-Mutable-Variable",
        LookupOfVariable => "Lookup-of-Variable",
        Assignment => "Assignment",
        DeclarationOfMutableArray => "Declaration-of-Mutable-Array",
        UpdatingOfArrayElement => "Updating-of-Array-Element",
        EvaluationOfArrayElement => "Evaluation-of-Array-Element",
        MutableReference => "Mutable-Reference",
        ImmutableReference => "Immutable-Reference",
        Dereference => "Dereference",
        FunctionDefinitionWithReturnType => "Function-Definition-with-Return-Type",
        MkDeclsHelperFunction => "mkDecls-Helper-Function",
        FunctionCall => "Function-Call",
        FunctionDefinitionWithoutReturnType => "Function-Definition-without-Return-Type",
        FunctionDefinitionReturnByLastExpression => "Function-Definition-Return-by-Last-Expression",
        Return => "Return",
        StructDefinition => "Struct-Definition",
        DeclarationOfStructInstance => "Declaration-of-Struct-Instance",
        F1F2HelperFunction => "F1-F2-Helper-Function",
        OwnershipMove => "Ownership-Move",
        F3HelperFunction => "F3-Helper-Function",
        F4HelperFunction => "F4-Helper-Function",
        EvaluationOfStructField => "Evaluation-of-Struct-Field",
        UpdatingOfStructField => "Updating-of-Struct-Field",
    }
    aux {
        Literal => "Literal",
        Parenthesis => "Parenthesis",
        BinaryOperation => "BinaryOperation",
        ShortCircuit => "ShortCircuit",
        UnaryOperation => "UnaryOperation",
        ArrayLiteral => "ArrayLiteral",
        ArrayRepeat => "ArrayRepeat",
        IndexOperand => "IndexOperand",
        BorrowExpression => "BorrowExpression",
        CallArguments => "CallArguments",
        Println => "Println",
        StructLiteral => "StructLiteral",
        LetInitializer => "LetInitializer",
        DeclarationOfImmutableArray => "DeclarationOfImmutableArray",
        AssignmentOperand => "AssignmentOperand",
        CompoundAssignment => "CompoundAssignment",
        DerefAssignment => "DerefAssignment",
        ExpressionStatement => "ExpressionStatement",
        ReturnStatement => "ReturnStatement",
        BlockEntry => "BlockEntry",
        BlockExit => "BlockExit",
        IfStatement => "IfStatement",
        IfBranch => "IfBranch",
        WhileLoop => "WhileLoop",
        LoopUnfold => "LoopUnfold",
        ForLoop => "ForLoop",
        ConstDeclaration => "ConstDeclaration",
    }
}

impl RuleTag {
    pub fn all() -> impl Iterator<Item = RuleTag> {
        RuleTag::CORE.iter().chain(RuleTag::AUXILIARY).copied()
    }

    pub fn from_name(name: &str) -> Option<RuleTag> {
        RuleTag::all().find(|t| t.name() == name)
    }

    pub fn is_core(self) -> bool {
        RuleTag::CORE.contains(&self)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_four_core_rules() {
        assert_eq!(RuleTag::CORE.len(), 24);
        let mut names: Vec<_> = RuleTag::all().map(RuleTag::name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), RuleTag::CORE.len() + RuleTag::AUXILIARY.len());
        for t in RuleTag::all() {
            assert_eq!(RuleTag::from_name(t.name()), Some(t));
        }
    }
}
