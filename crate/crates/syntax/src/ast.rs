//! Arena syntax tree. Nodes reference their children by [`NodeId`] and know
//! their parent, so analyses can walk both directions without borrowing
//! gymnastics.

use crate::text::TextRange;
use crate::token::Comment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Var,
    Let,
    Const,
}

impl VarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::Var => "var",
            VarKind::Let => "let",
            VarKind::Const => "const",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    Declaration,
    Expression,
    Arrow,
    /// Object or class method, getter, setter or constructor.
    Method,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Function {
    pub kind: FunctionKind,
    pub id: Option<NodeId>,
    pub params: Vec<NodeId>,
    pub body: NodeId,
    pub is_async: bool,
    pub is_generator: bool,
    /// Arrow function with a concise (expression) body.
    pub expression_body: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Method,
    Get,
    Set,
    Constructor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    Init,
    Get,
    Set,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Minus,
    Plus,
    Not,
    BitNot,
    Typeof,
    Void,
    Delete,
}

impl UnaryOp {
    pub fn as_str(self) -> &'static str {
        match self {
            UnaryOp::Minus => "-",
            UnaryOp::Plus => "+",
            UnaryOp::Not => "!",
            UnaryOp::BitNot => "~",
            UnaryOp::Typeof => "typeof",
            UnaryOp::Void => "void",
            UnaryOp::Delete => "delete",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdateOp {
    Increment,
    Decrement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Eq,
    NotEq,
    StrictEq,
    StrictNotEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
    Shl,
    Shr,
    UShr,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Exp,
    BitOr,
    BitXor,
    BitAnd,
    In,
    Instanceof,
}

impl BinaryOp {
    pub fn as_str(self) -> &'static str {
        use BinaryOp::*;
        match self {
            Eq => "==",
            NotEq => "!=",
            StrictEq => "===",
            StrictNotEq => "!==",
            Lt => "<",
            LtEq => "<=",
            Gt => ">",
            GtEq => ">=",
            Shl => "<<",
            Shr => ">>",
            UShr => ">>>",
            Add => "+",
            Sub => "-",
            Mul => "*",
            Div => "/",
            Mod => "%",
            Exp => "**",
            BitOr => "|",
            BitXor => "^",
            BitAnd => "&",
            In => "in",
            Instanceof => "instanceof",
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, BinaryOp::Eq | BinaryOp::NotEq | BinaryOp::StrictEq | BinaryOp::StrictNotEq)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicalOp {
    And,
    Or,
    Nullish,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssignOp {
    Assign,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Exp,
    Shl,
    Shr,
    UShr,
    BitOr,
    BitXor,
    BitAnd,
    And,
    Or,
    Nullish,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Program {
        body: Vec<NodeId>,
    },

    // statements and declarations
    VariableDeclaration {
        kind: VarKind,
        declarations: Vec<NodeId>,
    },
    VariableDeclarator {
        id: NodeId,
        init: Option<NodeId>,
    },
    Function(Box<Function>),
    Class {
        id: Option<NodeId>,
        super_class: Option<NodeId>,
        body: Vec<NodeId>,
        is_declaration: bool,
    },
    MethodDefinition {
        key: NodeId,
        value: NodeId,
        kind: MethodKind,
        is_static: bool,
        computed: bool,
    },
    PropertyDefinition {
        key: NodeId,
        value: Option<NodeId>,
        is_static: bool,
        computed: bool,
    },
    StaticBlock {
        body: Vec<NodeId>,
    },
    ExpressionStatement {
        expression: NodeId,
    },
    BlockStatement {
        body: Vec<NodeId>,
    },
    EmptyStatement,
    DebuggerStatement,
    ReturnStatement {
        argument: Option<NodeId>,
    },
    ThrowStatement {
        argument: NodeId,
    },
    BreakStatement {
        label: Option<NodeId>,
    },
    ContinueStatement {
        label: Option<NodeId>,
    },
    IfStatement {
        test: NodeId,
        consequent: NodeId,
        alternate: Option<NodeId>,
    },
    SwitchStatement {
        discriminant: NodeId,
        cases: Vec<NodeId>,
    },
    SwitchCase {
        test: Option<NodeId>,
        consequent: Vec<NodeId>,
    },
    TryStatement {
        block: NodeId,
        handler: Option<NodeId>,
        finalizer: Option<NodeId>,
    },
    CatchClause {
        param: Option<NodeId>,
        body: NodeId,
    },
    WhileStatement {
        test: NodeId,
        body: NodeId,
    },
    DoWhileStatement {
        body: NodeId,
        test: NodeId,
    },
    ForStatement {
        init: Option<NodeId>,
        test: Option<NodeId>,
        update: Option<NodeId>,
        body: NodeId,
    },
    ForInStatement {
        left: NodeId,
        right: NodeId,
        body: NodeId,
    },
    ForOfStatement {
        left: NodeId,
        right: NodeId,
        body: NodeId,
        is_await: bool,
    },
    LabeledStatement {
        label: NodeId,
        body: NodeId,
    },
    WithStatement {
        object: NodeId,
        body: NodeId,
    },

    // modules
    ImportDeclaration {
        specifiers: Vec<NodeId>,
        source: NodeId,
    },
    /// `imported` and `local` are the same node when there is no `as`.
    ImportSpecifier {
        imported: NodeId,
        local: NodeId,
    },
    ImportDefaultSpecifier {
        local: NodeId,
    },
    ImportNamespaceSpecifier {
        local: NodeId,
    },
    ExportNamedDeclaration {
        declaration: Option<NodeId>,
        specifiers: Vec<NodeId>,
        source: Option<NodeId>,
    },
    /// `local` and `exported` are the same node when there is no `as`.
    ExportSpecifier {
        local: NodeId,
        exported: NodeId,
    },
    ExportDefaultDeclaration {
        declaration: NodeId,
    },
    ExportAllDeclaration {
        exported: Option<NodeId>,
        source: NodeId,
    },

    // expressions
    Identifier {
        name: String,
    },
    PrivateName {
        name: String,
    },
    StringLiteral {
        value: String,
    },
    NumericLiteral {
        value: f64,
    },
    BigIntLiteral {
        raw: String,
    },
    BooleanLiteral {
        value: bool,
    },
    NullLiteral,
    RegExpLiteral {
        pattern: String,
        flags: String,
    },
    TemplateLiteral {
        quasis: Vec<NodeId>,
        expressions: Vec<NodeId>,
    },
    TemplateElement {
        cooked: Option<String>,
        raw: String,
    },
    TaggedTemplate {
        tag: NodeId,
        quasi: NodeId,
    },
    ThisExpression,
    Super,
    ArrayExpression {
        elements: Vec<Option<NodeId>>,
    },
    ObjectExpression {
        properties: Vec<NodeId>,
    },
    /// Object literal member. For shorthand members `key == value` (or the
    /// value is an `AssignmentPattern` whose left side is the key).
    Property {
        key: NodeId,
        value: NodeId,
        kind: PropertyKind,
        method: bool,
        shorthand: bool,
        computed: bool,
    },
    SpreadElement {
        argument: NodeId,
    },
    UnaryExpression {
        operator: UnaryOp,
        argument: NodeId,
    },
    UpdateExpression {
        operator: UpdateOp,
        prefix: bool,
        argument: NodeId,
    },
    BinaryExpression {
        operator: BinaryOp,
        left: NodeId,
        right: NodeId,
    },
    LogicalExpression {
        operator: LogicalOp,
        left: NodeId,
        right: NodeId,
    },
    AssignmentExpression {
        operator: AssignOp,
        left: NodeId,
        right: NodeId,
    },
    ConditionalExpression {
        test: NodeId,
        consequent: NodeId,
        alternate: NodeId,
    },
    CallExpression {
        callee: NodeId,
        arguments: Vec<NodeId>,
        optional: bool,
    },
    NewExpression {
        callee: NodeId,
        arguments: Vec<NodeId>,
    },
    MemberExpression {
        object: NodeId,
        property: NodeId,
        computed: bool,
        optional: bool,
    },
    SequenceExpression {
        expressions: Vec<NodeId>,
    },
    ParenthesizedExpression {
        expression: NodeId,
    },
    YieldExpression {
        argument: Option<NodeId>,
        delegate: bool,
    },
    AwaitExpression {
        argument: NodeId,
    },
    ImportExpression {
        source: NodeId,
    },
    MetaProperty {
        meta: NodeId,
        property: NodeId,
    },

    // patterns
    ObjectPattern {
        properties: Vec<NodeId>,
    },
    ArrayPattern {
        elements: Vec<Option<NodeId>>,
    },
    RestElement {
        argument: NodeId,
    },
    AssignmentPattern {
        left: NodeId,
        right: NodeId,
    },
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        use NodeKind::*;
        match self {
            Program { .. } => "Program",
            VariableDeclaration { .. } => "VariableDeclaration",
            VariableDeclarator { .. } => "VariableDeclarator",
            Function(f) => match f.kind {
                FunctionKind::Declaration => "FunctionDeclaration",
                FunctionKind::Expression | FunctionKind::Method => "FunctionExpression",
                FunctionKind::Arrow => "ArrowFunctionExpression",
            },
            Class { is_declaration: true, .. } => "ClassDeclaration",
            Class { .. } => "ClassExpression",
            MethodDefinition { .. } => "MethodDefinition",
            PropertyDefinition { .. } => "PropertyDefinition",
            StaticBlock { .. } => "StaticBlock",
            ExpressionStatement { .. } => "ExpressionStatement",
            BlockStatement { .. } => "BlockStatement",
            EmptyStatement => "EmptyStatement",
            DebuggerStatement => "DebuggerStatement",
            ReturnStatement { .. } => "ReturnStatement",
            ThrowStatement { .. } => "ThrowStatement",
            BreakStatement { .. } => "BreakStatement",
            ContinueStatement { .. } => "ContinueStatement",
            IfStatement { .. } => "IfStatement",
            SwitchStatement { .. } => "SwitchStatement",
            SwitchCase { .. } => "SwitchCase",
            TryStatement { .. } => "TryStatement",
            CatchClause { .. } => "CatchClause",
            WhileStatement { .. } => "WhileStatement",
            DoWhileStatement { .. } => "DoWhileStatement",
            ForStatement { .. } => "ForStatement",
            ForInStatement { .. } => "ForInStatement",
            ForOfStatement { .. } => "ForOfStatement",
            LabeledStatement { .. } => "LabeledStatement",
            WithStatement { .. } => "WithStatement",
            ImportDeclaration { .. } => "ImportDeclaration",
            ImportSpecifier { .. } => "ImportSpecifier",
            ImportDefaultSpecifier { .. } => "ImportDefaultSpecifier",
            ImportNamespaceSpecifier { .. } => "ImportNamespaceSpecifier",
            ExportNamedDeclaration { .. } => "ExportNamedDeclaration",
            ExportSpecifier { .. } => "ExportSpecifier",
            ExportDefaultDeclaration { .. } => "ExportDefaultDeclaration",
            ExportAllDeclaration { .. } => "ExportAllDeclaration",
            Identifier { .. } => "Identifier",
            PrivateName { .. } => "PrivateName",
            StringLiteral { .. } => "StringLiteral",
            NumericLiteral { .. } => "NumericLiteral",
            BigIntLiteral { .. } => "BigIntLiteral",
            BooleanLiteral { .. } => "BooleanLiteral",
            NullLiteral => "NullLiteral",
            RegExpLiteral { .. } => "RegExpLiteral",
            TemplateLiteral { .. } => "TemplateLiteral",
            TemplateElement { .. } => "TemplateElement",
            TaggedTemplate { .. } => "TaggedTemplateExpression",
            ThisExpression => "ThisExpression",
            Super => "Super",
            ArrayExpression { .. } => "ArrayExpression",
            ObjectExpression { .. } => "ObjectExpression",
            Property { .. } => "Property",
            SpreadElement { .. } => "SpreadElement",
            UnaryExpression { .. } => "UnaryExpression",
            UpdateExpression { .. } => "UpdateExpression",
            BinaryExpression { .. } => "BinaryExpression",
            LogicalExpression { .. } => "LogicalExpression",
            AssignmentExpression { .. } => "AssignmentExpression",
            ConditionalExpression { .. } => "ConditionalExpression",
            CallExpression { .. } => "CallExpression",
            NewExpression { .. } => "NewExpression",
            MemberExpression { .. } => "MemberExpression",
            SequenceExpression { .. } => "SequenceExpression",
            ParenthesizedExpression { .. } => "ParenthesizedExpression",
            YieldExpression { .. } => "YieldExpression",
            AwaitExpression { .. } => "AwaitExpression",
            ImportExpression { .. } => "ImportExpression",
            MetaProperty { .. } => "MetaProperty",
            ObjectPattern { .. } => "ObjectPattern",
            ArrayPattern { .. } => "ArrayPattern",
            RestElement { .. } => "RestElement",
            AssignmentPattern { .. } => "AssignmentPattern",
        }
    }

    pub fn is_statement(&self) -> bool {
        use NodeKind::*;
        match self {
            Function(f) => f.kind == FunctionKind::Declaration,
            Class { is_declaration, .. } => *is_declaration,
            VariableDeclaration { .. }
            | ExpressionStatement { .. }
            | BlockStatement { .. }
            | EmptyStatement
            | DebuggerStatement
            | ReturnStatement { .. }
            | ThrowStatement { .. }
            | BreakStatement { .. }
            | ContinueStatement { .. }
            | IfStatement { .. }
            | SwitchStatement { .. }
            | TryStatement { .. }
            | WhileStatement { .. }
            | DoWhileStatement { .. }
            | ForStatement { .. }
            | ForInStatement { .. }
            | ForOfStatement { .. }
            | LabeledStatement { .. }
            | WithStatement { .. }
            | ImportDeclaration { .. }
            | ExportNamedDeclaration { .. }
            | ExportDefaultDeclaration { .. }
            | ExportAllDeclaration { .. } => true,
            _ => false,
        }
    }

    pub fn is_expression(&self) -> bool {
        use NodeKind::*;
        match self {
            Function(f) => matches!(f.kind, FunctionKind::Expression | FunctionKind::Arrow),
            Class { is_declaration, .. } => !*is_declaration,
            Identifier { .. }
            | StringLiteral { .. }
            | NumericLiteral { .. }
            | BigIntLiteral { .. }
            | BooleanLiteral { .. }
            | NullLiteral
            | RegExpLiteral { .. }
            | TemplateLiteral { .. }
            | TaggedTemplate { .. }
            | ThisExpression
            | ArrayExpression { .. }
            | ObjectExpression { .. }
            | UnaryExpression { .. }
            | UpdateExpression { .. }
            | BinaryExpression { .. }
            | LogicalExpression { .. }
            | AssignmentExpression { .. }
            | ConditionalExpression { .. }
            | CallExpression { .. }
            | NewExpression { .. }
            | MemberExpression { .. }
            | SequenceExpression { .. }
            | ParenthesizedExpression { .. }
            | YieldExpression { .. }
            | AwaitExpression { .. }
            | ImportExpression { .. }
            | MetaProperty { .. } => true,
            _ => false,
        }
    }

    /// Children in source order.
    pub fn children(&self) -> Vec<NodeId> {
        use NodeKind::*;
        let mut out = Vec::new();
        let opt = |out: &mut Vec<NodeId>, id: &Option<NodeId>| {
            if let Some(id) = id {
                out.push(*id);
            }
        };
        match self {
            Program { body } | BlockStatement { body } | StaticBlock { body } => out.extend(body),
            VariableDeclaration { declarations, .. } => out.extend(declarations),
            VariableDeclarator { id, init } => {
                out.push(*id);
                opt(&mut out, init);
            }
            Function(f) => {
                opt(&mut out, &f.id);
                out.extend(&f.params);
                out.push(f.body);
            }
            Class { id, super_class, body, .. } => {
                opt(&mut out, id);
                opt(&mut out, super_class);
                out.extend(body);
            }
            MethodDefinition { key, value, .. } => out.extend([*key, *value]),
            PropertyDefinition { key, value, .. } => {
                out.push(*key);
                opt(&mut out, value);
            }
            ExpressionStatement { expression } => out.push(*expression),
            ReturnStatement { argument } => opt(&mut out, argument),
            ThrowStatement { argument } => out.push(*argument),
            BreakStatement { label } | ContinueStatement { label } => opt(&mut out, label),
            IfStatement { test, consequent, alternate } => {
                out.extend([*test, *consequent]);
                opt(&mut out, alternate);
            }
            SwitchStatement { discriminant, cases } => {
                out.push(*discriminant);
                out.extend(cases);
            }
            SwitchCase { test, consequent } => {
                opt(&mut out, test);
                out.extend(consequent);
            }
            TryStatement { block, handler, finalizer } => {
                out.push(*block);
                opt(&mut out, handler);
                opt(&mut out, finalizer);
            }
            CatchClause { param, body } => {
                opt(&mut out, param);
                out.push(*body);
            }
            WhileStatement { test, body } => out.extend([*test, *body]),
            DoWhileStatement { body, test } => out.extend([*body, *test]),
            ForStatement { init, test, update, body } => {
                opt(&mut out, init);
                opt(&mut out, test);
                opt(&mut out, update);
                out.push(*body);
            }
            ForInStatement { left, right, body } | ForOfStatement { left, right, body, .. } => {
                out.extend([*left, *right, *body])
            }
            LabeledStatement { label, body } => out.extend([*label, *body]),
            WithStatement { object, body } => out.extend([*object, *body]),
            ImportDeclaration { specifiers, source } => {
                out.extend(specifiers);
                out.push(*source);
            }
            ImportSpecifier { imported, local } => {
                out.push(*imported);
                if local != imported {
                    out.push(*local);
                }
            }
            ImportDefaultSpecifier { local } | ImportNamespaceSpecifier { local } => out.push(*local),
            ExportNamedDeclaration { declaration, specifiers, source } => {
                opt(&mut out, declaration);
                out.extend(specifiers);
                opt(&mut out, source);
            }
            ExportSpecifier { local, exported } => {
                out.push(*local);
                if exported != local {
                    out.push(*exported);
                }
            }
            ExportDefaultDeclaration { declaration } => out.push(*declaration),
            ExportAllDeclaration { exported, source } => {
                opt(&mut out, exported);
                out.push(*source);
            }
            TemplateLiteral { quasis, expressions } => {
                // quasis and expressions alternate, starting with a quasi
                for (i, q) in quasis.iter().enumerate() {
                    out.push(*q);
                    if let Some(e) = expressions.get(i) {
                        out.push(*e);
                    }
                }
            }
            TaggedTemplate { tag, quasi } => out.extend([*tag, *quasi]),
            ArrayExpression { elements } | ArrayPattern { elements } => out.extend(elements.iter().flatten()),
            ObjectExpression { properties } | ObjectPattern { properties } => out.extend(properties),
            Property { key, value, shorthand, .. } => {
                if *shorthand {
                    out.push(*value);
                } else {
                    out.extend([*key, *value]);
                }
            }
            SpreadElement { argument } | RestElement { argument } => out.push(*argument),
            UnaryExpression { argument, .. } | UpdateExpression { argument, .. } => out.push(*argument),
            AwaitExpression { argument } => out.push(*argument),
            BinaryExpression { left, right, .. }
            | LogicalExpression { left, right, .. }
            | AssignmentExpression { left, right, .. }
            | AssignmentPattern { left, right } => out.extend([*left, *right]),
            ConditionalExpression { test, consequent, alternate } => out.extend([*test, *consequent, *alternate]),
            CallExpression { callee, arguments, .. } | NewExpression { callee, arguments } => {
                out.push(*callee);
                out.extend(arguments);
            }
            MemberExpression { object, property, .. } => out.extend([*object, *property]),
            SequenceExpression { expressions } => out.extend(expressions),
            ParenthesizedExpression { expression } => out.push(*expression),
            YieldExpression { argument, .. } => opt(&mut out, argument),
            ImportExpression { source } => out.push(*source),
            MetaProperty { meta, property } => out.extend([*meta, *property]),
            Identifier { .. }
            | PrivateName { .. }
            | StringLiteral { .. }
            | NumericLiteral { .. }
            | BigIntLiteral { .. }
            | BooleanLiteral { .. }
            | NullLiteral
            | RegExpLiteral { .. }
            | TemplateElement { .. }
            | ThisExpression
            | Super
            | EmptyStatement
            | DebuggerStatement => {}
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub range: TextRange,
    pub parent: Option<NodeId>,
}

/// A recoverable note produced while parsing, e.g. syntax newer than the
/// supported baseline that was nevertheless understood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseNote {
    pub range: TextRange,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct SyntaxTree {
    pub(crate) nodes: Vec<Node>,
    pub(crate) root: NodeId,
    pub comments: Vec<Comment>,
    /// Range of every token, in source order.
    pub tokens: Vec<TextRange>,
    pub is_module: bool,
    pub notes: Vec<ParseNote>,
}

impl SyntaxTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn kind(&self, id: NodeId) -> &NodeKind {
        &self.nodes[id.index()].kind
    }

    pub fn range(&self, id: NodeId) -> TextRange {
        self.nodes[id.index()].range
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        self.kind(id).children()
    }

    /// Every node reachable from the root, in allocation order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32)
            .map(NodeId)
            .filter(move |id| *id == self.root || self.nodes[id.index()].parent.is_some())
    }

    /// Pre-order traversal of `id` and everything below it.
    pub fn descendants(&self, id: NodeId) -> Descendants<'_> {
        Descendants { tree: self, stack: vec![id] }
    }

    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.parent(id), move |p| self.parent(*p))
    }

    pub fn function(&self, id: NodeId) -> Option<&Function> {
        match self.kind(id) {
            NodeKind::Function(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_function(&self, id: NodeId) -> bool {
        matches!(self.kind(id), NodeKind::Function(_))
    }

    /// Nearest enclosing function node, not counting `id` itself.
    pub fn enclosing_function(&self, id: NodeId) -> Option<NodeId> {
        self.ancestors(id).find(|a| self.is_function(*a))
    }

    pub fn identifier_name(&self, id: NodeId) -> Option<&str> {
        match self.kind(id) {
            NodeKind::Identifier { name } => Some(name),
            _ => None,
        }
    }

    pub fn string_value(&self, id: NodeId) -> Option<&str> {
        match self.kind(self.skip_parens(id)) {
            NodeKind::StringLiteral { value } => Some(value),
            _ => None,
        }
    }

    /// Strip any number of wrapping parentheses.
    pub fn skip_parens(&self, mut id: NodeId) -> NodeId {
        while let NodeKind::ParenthesizedExpression { expression } = self.kind(id) {
            id = *expression;
        }
        id
    }

    /// Name of a non-computed key or a computed string-literal key.
    pub fn property_key_name(&self, key: NodeId, computed: bool) -> Option<&str> {
        match self.kind(key) {
            NodeKind::Identifier { name } if !computed => Some(name),
            NodeKind::PrivateName { name } => Some(name),
            NodeKind::StringLiteral { value } => Some(value),
            _ => None,
        }
    }

    /// Dotted path for identifier/member chains such as `window.location.href`.
    /// Computed members with string-literal keys are included; anything else
    /// (calls, computed expressions) yields `None`.
    pub fn member_path(&self, id: NodeId) -> Option<String> {
        let id = self.skip_parens(id);
        match self.kind(id) {
            NodeKind::Identifier { name } => Some(name.clone()),
            NodeKind::ThisExpression => Some("this".to_string()),
            NodeKind::MemberExpression { object, property, computed, .. } => {
                let base = self.member_path(*object)?;
                let prop = self.property_key_name(*property, *computed)?;
                Some(format!("{base}.{prop}"))
            }
            _ => None,
        }
    }

    /// Like [`member_path`](Self::member_path) but tolerates call expressions
    /// in the chain, rendering them as `()`: `res.status(500).send` becomes
    /// `res.status().send`.
    pub fn callee_path(&self, id: NodeId) -> Option<String> {
        let id = self.skip_parens(id);
        match self.kind(id) {
            NodeKind::CallExpression { callee, .. } => Some(format!("{}()", self.callee_path(*callee)?)),
            NodeKind::MemberExpression { object, property, computed, .. } => {
                let base = self.callee_path(*object)?;
                let prop = self.property_key_name(*property, *computed)?;
                Some(format!("{base}.{prop}"))
            }
            _ => self.member_path(id),
        }
    }

    /// Last property name of a member expression, or the identifier name.
    pub fn last_name(&self, id: NodeId) -> Option<&str> {
        let id = self.skip_parens(id);
        match self.kind(id) {
            NodeKind::Identifier { name } => Some(name),
            NodeKind::MemberExpression { property, computed, .. } => self.property_key_name(*property, *computed),
            _ => None,
        }
    }

    /// Root identifier of a member/call chain: `a` for `a.b[c].d()`.
    pub fn root_identifier(&self, id: NodeId) -> Option<NodeId> {
        let id = self.skip_parens(id);
        match self.kind(id) {
            NodeKind::Identifier { .. } => Some(id),
            NodeKind::MemberExpression { object, .. } => self.root_identifier(*object),
            NodeKind::CallExpression { callee, .. } => self.root_identifier(*callee),
            _ => None,
        }
    }

    pub fn text<'a>(&self, source: &'a str, id: NodeId) -> &'a str {
        self.range(id).slice(source)
    }
}

pub struct Descendants<'a> {
    tree: &'a SyntaxTree,
    stack: Vec<NodeId>,
}

impl Iterator for Descendants<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.stack.pop()?;
        let children = self.tree.children(id);
        self.stack.extend(children.into_iter().rev());
        Some(id)
    }
}
