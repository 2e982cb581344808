#include "invmean/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>

namespace invmean {

namespace {

std::string describe(const SourcePos& pos) {
    return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

// -- lexer --------------------------------------------------------------------

enum class Tok {
    end, number, ident, plus, minus, star, slash, lparen, rparen, comma, lt, le, gt, ge, bad
};

struct Token {
    Tok kind = Tok::end;
    std::string_view text;
    SourcePos pos;
};

std::string token_name(const Token& t) {
    switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::number: return "number '" + std::string(t.text) + "'";
    case Tok::ident: return "'" + std::string(t.text) + "'";
    case Tok::bad: return "invalid character";
    default: return "'" + std::string(t.text) + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.pos = pos_;
        if (i_ >= src_.size()) return t;

        const std::size_t start = i_;
        const char c = src_[i_];
        auto single = [&](Tok k) {
            advance();
            t.kind = k;
            t.text = src_.substr(start, 1);
            return t;
        };
        if (is_digit(c) || (c == '.' && i_ + 1 < src_.size() && is_digit(src_[i_ + 1]))) {
            while (i_ < src_.size() && is_digit(src_[i_])) advance();
            if (i_ < src_.size() && src_[i_] == '.') {
                advance();
                while (i_ < src_.size() && is_digit(src_[i_])) advance();
            }
            if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
                std::size_t k = i_ + 1;
                if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
                if (k < src_.size() && is_digit(src_[k])) {
                    while (i_ < k) advance();
                    while (i_ < src_.size() && is_digit(src_[i_])) advance();
                }
            }
            t.kind = Tok::number;
            t.text = src_.substr(start, i_ - start);
            return t;
        }
        if (is_alpha(c)) {
            while (i_ < src_.size() && (is_alpha(src_[i_]) || is_digit(src_[i_]))) advance();
            t.kind = Tok::ident;
            t.text = src_.substr(start, i_ - start);
            return t;
        }
        switch (c) {
        case '+': return single(Tok::plus);
        case '-': return single(Tok::minus);
        case '*': return single(Tok::star);
        case '/': return single(Tok::slash);
        case '(': return single(Tok::lparen);
        case ')': return single(Tok::rparen);
        case ',': return single(Tok::comma);
        case '<':
        case '>': {
            advance();
            const bool eq = i_ < src_.size() && src_[i_] == '=';
            if (eq) advance();
            t.kind = c == '<' ? (eq ? Tok::le : Tok::lt) : (eq ? Tok::ge : Tok::gt);
            t.text = src_.substr(start, i_ - start);
            return t;
        }
        default: return single(Tok::bad);
        }
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }

    void advance() {
        if (src_[i_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++i_;
    }

    void skip_space() {
        while (i_ < src_.size() &&
               (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\n' || src_[i_] == '\r'))
            advance();
    }

    std::string_view src_;
    std::size_t i_ = 0;
    SourcePos pos_;
};

// -- parser -------------------------------------------------------------------

using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::size_t kMaxDepth = 256;
constexpr std::size_t kMaxNodes = 10'000;

const std::vector<std::string> kExpectOperand = {"number", "x", "y", "(", "-", "function"};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    NodePtr parse_all() {
        NodePtr root = expr();
        if (cur_.kind != Tok::end)
            fail("unexpected " + token_name(cur_), {"operator", "end of input"});
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
        throw ParseError(msg, cur_.pos, std::move(expected));
    }

    void bump() { cur_ = lex_.next(); }

    bool at_keyword(std::string_view kw) const { return cur_.kind == Tok::ident && cur_.text == kw; }

    void expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) fail("expected " + what + ", found " + token_name(cur_), {what});
        bump();
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) p_.fail("expression nested too deeply", {});
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    std::shared_ptr<ExprNode> fresh() {
        if (++nodes_ > kMaxNodes) fail("expression too large", {});
        return std::make_shared<ExprNode>();
    }

    NodePtr make(NodeKind kind, SourcePos pos, std::vector<NodePtr> kids = {}) {
        auto n = fresh();
        n->kind = kind;
        n->pos = pos;
        n->kids = std::move(kids);
        return n;
    }

    NodePtr expr() {
        DepthGuard guard(*this);
        if (!at_keyword("if")) return arith();

        const SourcePos pos = cur_.pos;
        bump();
        NodePtr lhs = arith();
        Compare cmp;
        switch (cur_.kind) {
        case Tok::lt: cmp = Compare::lt; break;
        case Tok::le: cmp = Compare::le; break;
        case Tok::gt: cmp = Compare::gt; break;
        case Tok::ge: cmp = Compare::ge; break;
        default:
            fail("expected comparison, found " + token_name(cur_), {"<", "<=", ">", ">="});
        }
        bump();
        NodePtr rhs = arith();
        if (!at_keyword("then")) fail("expected 'then', found " + token_name(cur_), {"then"});
        bump();
        NodePtr then_branch = expr();
        if (!at_keyword("else")) fail("expected 'else', found " + token_name(cur_), {"else"});
        bump();
        NodePtr else_branch = expr();

        auto n = fresh();
        n->kind = NodeKind::cond;
        n->cmp = cmp;
        n->pos = pos;
        n->kids = {std::move(lhs), std::move(rhs), std::move(then_branch), std::move(else_branch)};
        return n;
    }

    NodePtr arith() {
        NodePtr lhs = term();
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            const NodeKind kind = cur_.kind == Tok::plus ? NodeKind::add : NodeKind::sub;
            const SourcePos pos = cur_.pos;
            bump();
            lhs = make(kind, pos, {lhs, term()});
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
            const NodeKind kind = cur_.kind == Tok::star ? NodeKind::mul : NodeKind::div;
            const SourcePos pos = cur_.pos;
            bump();
            lhs = make(kind, pos, {lhs, unary()});
        }
        return lhs;
    }

    NodePtr unary() {
        DepthGuard guard(*this);
        if (cur_.kind == Tok::minus) {
            const SourcePos pos = cur_.pos;
            bump();
            return make(NodeKind::neg, pos, {unary()});
        }
        return primary();
    }

    double number() {
        double v = 0.0;
        const char* first = cur_.text.data();
        const char* last = first + cur_.text.size();
        const auto [end, ec] = std::from_chars(first, last, v);
        if (ec == std::errc::result_out_of_range || (ec == std::errc{} && !std::isfinite(v)))
            fail("numeric literal out of range", {});
        if (ec != std::errc{} || end != last) fail("malformed numeric literal", {"number"});
        bump();
        return v;
    }

    NodePtr primary() {
        const SourcePos pos = cur_.pos;
        switch (cur_.kind) {
        case Tok::number: {
            auto n = fresh();
            n->kind = NodeKind::constant;
            n->pos = pos;
            n->value = number();
            return n;
        }
        case Tok::lparen: {
            bump();
            NodePtr inner = expr();
            expect(Tok::rparen, ")");
            return inner;
        }
        case Tok::ident: return identifier();
        case Tok::end: fail("expected expression", kExpectOperand);
        default: fail("expected expression, found " + token_name(cur_), kExpectOperand);
        }
    }

    NodePtr identifier() {
        const SourcePos pos = cur_.pos;
        const std::string_view name = cur_.text;
        if (name == "x" || name == "y") {
            bump();
            auto n = fresh();
            n->kind = NodeKind::variable;
            n->variable = name[0];
            n->pos = pos;
            return n;
        }

        NodeKind kind;
        if (name == "sqrt") kind = NodeKind::sqrt;
        else if (name == "abs") kind = NodeKind::abs;
        else if (name == "min") kind = NodeKind::min;
        else if (name == "max") kind = NodeKind::max;
        else if (name == "pow") kind = NodeKind::pow;
        else if (name == "if" || name == "then" || name == "else")
            fail("unexpected keyword '" + std::string(name) + "'", kExpectOperand);
        else
            fail("unknown identifier '" + std::string(name) + "'",
                 {"x", "y", "sqrt", "abs", "min", "max", "pow"});

        bump();
        expect(Tok::lparen, "(");
        if (kind == NodeKind::pow) {
            NodePtr base = expr();
            expect(Tok::comma, ",");
            bool negative = false;
            if (cur_.kind == Tok::minus) {
                negative = true;
                bump();
            }
            if (cur_.kind != Tok::number)
                fail("pow exponent must be a numeric constant", {"number"});
            const double e = number();
            expect(Tok::rparen, ")");
            auto n = fresh();
            n->kind = NodeKind::pow;
            n->pos = pos;
            n->value = negative ? -e : e;
            n->kids = {std::move(base)};
            return n;
        }

        std::vector<NodePtr> args{expr()};
        while (cur_.kind == Tok::comma) {
            bump();
            args.push_back(expr());
        }
        expect(Tok::rparen, ")");
        const bool nary = kind == NodeKind::min || kind == NodeKind::max;
        if (nary && args.size() < 2)
            throw ParseError(std::string(name) + " needs at least two arguments", pos);
        if (!nary && args.size() != 1)
            throw ParseError(std::string(name) + " takes exactly one argument", pos);
        return make(kind, pos, std::move(args));
    }

    Lexer lex_;
    Token cur_;
    std::size_t depth_ = 0;
    std::size_t nodes_ = 0;
};

// -- evaluation ---------------------------------------------------------------

double eval(const ExprNode& n, double x, double y) {
    switch (n.kind) {
    case NodeKind::constant: return n.value;
    case NodeKind::variable: return n.variable == 'x' ? x : y;
    case NodeKind::add: return eval(*n.kids[0], x, y) + eval(*n.kids[1], x, y);
    case NodeKind::sub: return eval(*n.kids[0], x, y) - eval(*n.kids[1], x, y);
    case NodeKind::mul: return eval(*n.kids[0], x, y) * eval(*n.kids[1], x, y);
    case NodeKind::div: {
        const double num = eval(*n.kids[0], x, y);
        const double den = eval(*n.kids[1], x, y);
        if (den == 0.0) throw EvalError("division by zero", n.pos);
        return num / den;
    }
    case NodeKind::neg: return -eval(*n.kids[0], x, y);
    case NodeKind::sqrt: {
        const double v = eval(*n.kids[0], x, y);
        if (v < 0.0 || std::isnan(v)) throw EvalError("square root of negative value", n.pos);
        return std::sqrt(v);
    }
    case NodeKind::abs: return std::abs(eval(*n.kids[0], x, y));
    case NodeKind::min:
    case NodeKind::max: {
        double acc = eval(*n.kids[0], x, y);
        for (std::size_t i = 1; i < n.kids.size(); ++i) {
            const double v = eval(*n.kids[i], x, y);
            acc = n.kind == NodeKind::min ? std::min(acc, v) : std::max(acc, v);
        }
        return acc;
    }
    case NodeKind::pow: {
        const double v = std::pow(eval(*n.kids[0], x, y), n.value);
        if (!std::isfinite(v)) throw EvalError("pow outside its domain", n.pos);
        return v;
    }
    case NodeKind::cond: {
        const double a = eval(*n.kids[0], x, y);
        const double b = eval(*n.kids[1], x, y);
        bool take;
        switch (n.cmp) {
        case Compare::lt: take = a < b; break;
        case Compare::le: take = a <= b; break;
        case Compare::gt: take = a > b; break;
        case Compare::ge: take = a >= b; break;
        default: take = false;
        }
        return eval(*n.kids[take ? 2 : 3], x, y);
    }
    }
    return 0.0;
}

// -- printing -----------------------------------------------------------------

std::string number_text(double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

void print(const ExprNode& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print(*n.kids[0], out);
        out += op;
        print(*n.kids[1], out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i) out += ", ";
            print(*n.kids[i], out);
        }
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::constant: out += number_text(n.value); break;
    case NodeKind::variable: out += n.variable; break;
    case NodeKind::add: binary(" + "); break;
    case NodeKind::sub: binary(" - "); break;
    case NodeKind::mul: binary(" * "); break;
    case NodeKind::div: binary(" / "); break;
    case NodeKind::neg:
        out += "(-";
        print(*n.kids[0], out);
        out += ')';
        break;
    case NodeKind::sqrt: call("sqrt"); break;
    case NodeKind::abs: call("abs"); break;
    case NodeKind::min: call("min"); break;
    case NodeKind::max: call("max"); break;
    case NodeKind::pow:
        out += "pow(";
        print(*n.kids[0], out);
        out += ", " + number_text(n.value) + ")";
        break;
    case NodeKind::cond: {
        static constexpr const char* ops[] = {" < ", " <= ", " > ", " >= "};
        out += "(if ";
        print(*n.kids[0], out);
        out += ops[static_cast<int>(n.cmp)];
        print(*n.kids[1], out);
        out += " then ";
        print(*n.kids[2], out);
        out += " else ";
        print(*n.kids[3], out);
        out += ')';
        break;
    }
    }
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
    switch (a.kind) {
    case NodeKind::constant:
    case NodeKind::pow:
        if (std::memcmp(&a.value, &b.value, sizeof(double)) != 0) return false;
        break;
    case NodeKind::variable:
        if (a.variable != b.variable) return false;
        break;
    case NodeKind::cond:
        if (a.cmp != b.cmp) return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!same_tree(*a.kids[i], *b.kids[i])) return false;
    return true;
}

bool mentions(const ExprNode& n, char v) {
    if (n.kind == NodeKind::variable && n.variable == v) return true;
    return std::any_of(n.kids.begin(), n.kids.end(),
                       [v](const auto& k) { return mentions(*k, v); });
}

}  // namespace

ParseError::ParseError(const std::string& message, SourcePos pos,
                       std::vector<std::string> expected)
    : Error("syntax error at " + describe(pos) + ": " + message +
            (expected.empty() ? std::string() : " (expected " + join(expected) + ")")),
      message_(message),
      pos_(pos),
      expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& message, SourcePos pos)
    : Error("evaluation error at " + describe(pos) + ": " + message), pos_(pos) {}

MeanExpr MeanExpr::parse(std::string_view source) { return MeanExpr(Parser(source).parse_all()); }

double MeanExpr::operator()(double x, double y) const { return eval(*root_, x, y); }

std::string MeanExpr::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool MeanExpr::uses_variable(char v) const { return mentions(*root_, v); }

bool operator==(const MeanExpr& a, const MeanExpr& b) { return same_tree(*a.root_, *b.root_); }

Mean lift_to_mean(const MeanExpr& expr, const Interval& domain, const GridSpec& grid,
                  std::string name) {
    bool symmetric = true;
    bool strict = true;
    std::optional<Point> witness;
    double witness_value = 0.0;
    for (const Point p : sample_points(grid, domain)) {
        double v = 0.0;
        double swapped = 0.0;
        try {
            v = expr(p.x, p.y);
            swapped = expr(p.y, p.x);
        } catch (const EvalError& e) {
            std::ostringstream os;
            os.precision(17);
            os << e.what() << " (at x=" << p.x << ", y=" << p.y << ")";
            throw EvalError(os.str(), e.position());
        }
        const double lo = std::min(p.x, p.y);
        const double hi = std::max(p.x, p.y);
        if (!(lo <= v && v <= hi)) {
            if (!witness || p < *witness) {
                witness = p;
                witness_value = v;
            }
        }
        if (v != swapped) symmetric = false;
        if (p.x != p.y && !(lo < v && v < hi)) strict = false;
    }
    if (witness) {
        std::ostringstream os;
        os.precision(17);
        os << "not a mean: value " << witness_value << " at (" << witness->x << ", "
           << witness->y << ") lies outside [" << std::min(witness->x, witness->y) << ", "
           << std::max(witness->x, witness->y) << "]";
        throw MeanBoundsError(os.str(), witness->x, witness->y, witness_value);
    }

    PropertySet props;
    if (symmetric) props = props.with(MeanProperty::symmetric);
    if (strict) props = props.with(MeanProperty::strict);
    return Mean(name.empty() ? expr.to_string() : std::move(name), domain,
                [expr](double x, double y) { return expr(x, y); }, props);
}

Mean mean_from_text(const std::string& text, const Interval& domain, const GridSpec& grid) {
    if (auto b = parse_builtin(text)) return make_builtin(*b, domain);
    constexpr std::string_view kc_prefix = "kc:";
    if (text.starts_with(kc_prefix)) {
        const std::string_view digits = std::string_view(text).substr(kc_prefix.size());
        double c = 0.0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), c);
        if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size())
            throw InvalidArgument("kc: needs a number, got '" + text + "'");
        return make_kc(c, domain);
    }
    return lift_to_mean(MeanExpr::parse(text), domain, grid, text);
}

}  // namespace invmean
