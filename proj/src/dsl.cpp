#include "hopt/dsl.hpp"

#include <cctype>
#include <set>

namespace hopt::dsl {

namespace {

struct Token {
    enum class Kind { ident, number, punct, end };
    Kind kind = Kind::end;
    std::string text;
    Pos pos;
};

const std::set<std::string> keywords{"model", "object", "morphism", "tower", "check"};

std::vector<Token> lex(const std::string& src)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        Token t;
        t.pos = {line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            t.kind = Token::Kind::ident;
            t.text = src.substr(i, j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            t.kind = Token::Kind::number;
            t.text = src.substr(i, j - i);
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            t.kind = Token::Kind::punct;
            t.text = "->";
        } else if (std::string(";:=[]{}(),*/-").find(c) != std::string::npos) {
            t.kind = Token::Kind::punct;
            t.text = std::string(1, c);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        advance(t.text.size());
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program()
    {
        Program p;
        while (peek().kind != Token::Kind::end)
            p.stmts.push_back(statement());
        return p;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

    bool is(const std::string& text, std::size_t k = 0) const
    {
        const auto& t = peek(k);
        return t.kind != Token::Kind::end && t.text == text && (t.kind == Token::Kind::punct || t.kind == Token::Kind::ident);
    }

    [[noreturn]] void fail(const std::set<std::string>& expected) const
    {
        const auto& t = peek();
        std::string list;
        for (const auto& e : expected)
            list += (list.empty() ? "" : ", ") + e;
        const std::string got = t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
        throw ParseError("expected one of {" + list + "}, got " + got, t.pos.line, t.pos.column);
    }

    Token expect(const std::string& text)
    {
        if (!is(text))
            fail({"'" + text + "'"});
        return toks_[pos_++];
    }

    Token ident()
    {
        if (peek().kind != Token::Kind::ident)
            fail({"identifier"});
        return toks_[pos_++];
    }

    Token number()
    {
        if (peek().kind != Token::Kind::number)
            fail({"number"});
        return toks_[pos_++];
    }

    Stmt statement()
    {
        Stmt s;
        s.pos = peek().pos;
        if (is("model")) {
            ++pos_;
            s.kind = Stmt::Kind::model;
            s.name = ident().text;
        } else if (is("object")) {
            ++pos_;
            s.kind = Stmt::Kind::object;
            s.name = ident().text;
            expect("=");
            if (is("{")) {
                ++pos_;
                if (!is("}")) {
                    s.elements.push_back(element());
                    while (is(",")) {
                        ++pos_;
                        s.elements.push_back(element());
                    }
                }
                expect("}");
            } else if (peek().kind == Token::Kind::number) {
                s.dim = std::stoull(number().text);
            } else {
                fail({"'{'", "number"});
            }
        } else if (is("morphism")) {
            ++pos_;
            s.kind = Stmt::Kind::morphism;
            s.name = ident().text;
            expect(":");
            s.dom = object();
            expect("->");
            s.cod = object();
            expect("=");
            s.body = morphism();
        } else if (is("tower")) {
            ++pos_;
            s.kind = Stmt::Kind::tower;
            s.name = ident().text;
            expect("=");
            expect("[");
            s.layers.push_back(ident().text);
            while (is(",")) {
                ++pos_;
                s.layers.push_back(ident().text);
            }
            expect("]");
        } else if (is("check")) {
            ++pos_;
            s.kind = Stmt::Kind::check;
            if (is("laws") && peek(1).kind == Token::Kind::ident)
                ++pos_;
            s.name = ident().text;
            while (peek().kind == Token::Kind::ident) {
                const auto key = ident().text;
                expect("=");
                std::string value = element();
                while (is(",")) {
                    ++pos_;
                    value += "," + element();
                }
                s.options.emplace_back(key, value);
            }
        } else {
            fail({"'model'", "'object'", "'morphism'", "'tower'", "'check'"});
        }
        expect(";");
        return s;
    }

    std::string element()
    {
        if (peek().kind == Token::Kind::ident || peek().kind == Token::Kind::number)
            return toks_[pos_++].text;
        fail({"identifier", "number"});
    }

    ObjAst object()
    {
        ObjAst first = object_atom();
        if (!is("*"))
            return first;
        ObjAst t;
        t.kind = ObjAst::Kind::tensor;
        t.pos = first.pos;
        t.parts.push_back(std::move(first));
        while (is("*")) {
            ++pos_;
            t.parts.push_back(object_atom());
        }
        return t;
    }

    ObjAst object_atom()
    {
        ObjAst o;
        o.pos = peek().pos;
        if (is("[")) {
            ++pos_;
            o.kind = ObjAst::Kind::hom;
            o.parts.push_back(object());
            expect(",");
            o.parts.push_back(object());
            expect("]");
            return o;
        }
        if (is("(")) {
            ++pos_;
            o = object();
            expect(")");
            return o;
        }
        if (peek().kind != Token::Kind::ident)
            fail({"identifier", "'I'", "'['", "'('"});
        o.name = ident().text;
        o.kind = o.name == "I" ? ObjAst::Kind::unit : ObjAst::Kind::name;
        return o;
    }

    // A ';' continues the expression when the next token starts another
    // operand and is not a statement keyword.
    bool continues_sequence() const
    {
        if (!is(";"))
            return false;
        const auto& t = peek(1);
        if (t.kind == Token::Kind::ident)
            return keywords.count(t.text) == 0;
        return t.kind == Token::Kind::punct && (t.text == "(" || t.text == "{" || t.text == "[");
    }

    MorAst morphism()
    {
        MorAst first = tensor_expr();
        while (continues_sequence()) {
            const Pos p = peek().pos;
            ++pos_;
            MorAst m;
            m.kind = MorAst::Kind::then;
            m.pos = p;
            m.parts.push_back(std::move(first));
            m.parts.push_back(tensor_expr());
            first = std::move(m);
        }
        return first;
    }

    MorAst tensor_expr()
    {
        MorAst first = operand();
        while (is("*")) {
            const Pos p = peek().pos;
            ++pos_;
            MorAst m;
            m.kind = MorAst::Kind::tensor;
            m.pos = p;
            m.parts.push_back(std::move(first));
            m.parts.push_back(operand());
            first = std::move(m);
        }
        return first;
    }

    void objects(MorAst& m, std::size_t n)
    {
        expect("(");
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0)
                expect(",");
            m.objects.push_back(object());
        }
        expect(")");
    }

    MorAst operand()
    {
        MorAst m;
        m.pos = peek().pos;
        if (is("(")) {
            ++pos_;
            m = morphism();
            expect(")");
            return m;
        }
        if (is("{") || is("[")) {
            m.kind = MorAst::Kind::literal;
            m.literal = literal();
            return m;
        }
        if (peek().kind != Token::Kind::ident)
            fail({"identifier", "'('", "'{'", "'['"});
        const std::string head = ident().text;
        const bool call = is("(");
        if (call && head == "id") {
            m.kind = MorAst::Kind::id;
            objects(m, 1);
        } else if (call && head == "braid") {
            m.kind = MorAst::Kind::braid;
            objects(m, 2);
        } else if (call && head == "seq") {
            m.kind = MorAst::Kind::seq;
            objects(m, 3);
        } else if (call && head == "par") {
            m.kind = MorAst::Kind::par;
            objects(m, 4);
        } else if (call && head == "eval") {
            m.kind = MorAst::Kind::eval;
            objects(m, 2);
        } else if (call && (head == "kappa" || head == "curry")) {
            m.kind = head == "kappa" ? MorAst::Kind::kappa : MorAst::Kind::curry;
            expect("(");
            m.parts.push_back(morphism());
            if (head == "curry" && is(",")) {
                ++pos_;
                m.objects.push_back(object());
            }
            expect(")");
        } else {
            m.kind = MorAst::Kind::name;
            m.name = head;
        }
        return m;
    }

    std::string rational()
    {
        std::string out;
        if (is("-")) {
            ++pos_;
            out = "-";
        }
        out += number().text;
        if (is("/")) {
            ++pos_;
            out += "/" + number().text;
        }
        return out;
    }

    Literal literal()
    {
        Literal lit;
        if (is("[")) {
            lit.matrix = true;
            ++pos_;
            do {
                if (!lit.rows.empty())
                    ++pos_;
                expect("[");
                std::vector<std::string> row{rational()};
                while (is(",")) {
                    ++pos_;
                    row.push_back(rational());
                }
                expect("]");
                lit.rows.push_back(std::move(row));
            } while (is(","));
            expect("]");
            return lit;
        }
        expect("{");
        if (!is("}")) {
            do {
                if (!lit.pairs.empty())
                    ++pos_;
                const auto x = element();
                expect("->");
                lit.pairs.emplace_back(x, element());
            } while (is(","));
        }
        expect("}");
        return lit;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

Program parse(const std::string& source) { return Parser(lex(source)).program(); }

std::string render(const ObjAst& o)
{
    switch (o.kind) {
    case ObjAst::Kind::unit:
        return "I";
    case ObjAst::Kind::name:
        return o.name;
    case ObjAst::Kind::hom:
        return "[" + render(o.parts[0]) + "," + render(o.parts[1]) + "]";
    case ObjAst::Kind::tensor: {
        std::string s;
        for (const auto& p : o.parts)
            s += (s.empty() ? "" : " * ") + (p.kind == ObjAst::Kind::tensor ? "(" + render(p) + ")" : render(p));
        return s;
    }
    }
    return "?";
}

std::string render(const MorAst& m)
{
    auto objs = [&] {
        std::string s;
        for (const auto& o : m.objects)
            s += (s.empty() ? "" : ",") + render(o);
        return "(" + s + ")";
    };
    switch (m.kind) {
    case MorAst::Kind::name:
        return m.name;
    case MorAst::Kind::then:
        return render(m.parts[0]) + " ; " + render(m.parts[1]);
    case MorAst::Kind::tensor: {
        auto side = [](const MorAst& p) {
            return p.kind == MorAst::Kind::then ? "(" + render(p) + ")" : render(p);
        };
        return side(m.parts[0]) + " * " + side(m.parts[1]);
    }
    case MorAst::Kind::id:
        return "id" + objs();
    case MorAst::Kind::braid:
        return "braid" + objs();
    case MorAst::Kind::seq:
        return "seq" + objs();
    case MorAst::Kind::par:
        return "par" + objs();
    case MorAst::Kind::eval:
        return "eval" + objs();
    case MorAst::Kind::kappa:
        return "kappa(" + render(m.parts[0]) + ")";
    case MorAst::Kind::curry:
        return "curry(" + render(m.parts[0]) + (m.objects.empty() ? "" : ", " + render(m.objects[0])) + ")";
    case MorAst::Kind::literal: {
        std::string s;
        if (m.literal.matrix) {
            for (const auto& row : m.literal.rows) {
                std::string r;
                for (const auto& x : row)
                    r += (r.empty() ? "" : ",") + x;
                s += (s.empty() ? "" : ",") + ("[" + r + "]");
            }
            return "[" + s + "]";
        }
        for (const auto& [x, y] : m.literal.pairs)
            s += (s.empty() ? "" : ",") + x + "->" + y;
        return "{" + s + "}";
    }
    }
    return "?";
}

} // namespace hopt::dsl
