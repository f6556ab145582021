#include <algorithm>

#include "sketchlab/little.hpp"
#include "sketchlab/prelude.hpp"

namespace sketchlab {
namespace {

constexpr size_t kLineWidth = 80;
constexpr const char* kLambda = "\xCE\xBB";

std::string pad(int n) { return std::string(static_cast<size_t>(std::max(n, 0)), ' '); }

std::string patternText(const Pattern& p) {
    if (!p.isList) return p.name;
    std::string s = "[";
    for (size_t i = 0; i < p.elems.size(); ++i) {
        if (i) s += ' ';
        s += patternText(p.elems[i]);
    }
    return s + "]";
}

bool isDefChain(const Expr& e) { return e.kind == ExprKind::Let && e.isDef; }

bool isFlat(const Expr& e) {
    if (!e.comments.empty() || !e.trailing.empty()) return false;
    if (e.kind == ExprKind::Let) return false;
    if (e.kind == ExprKind::Lambda && isDefChain(e.kids[0])) return false;
    for (const auto& k : e.kids)
        if (!isFlat(k)) return false;
    return true;
}

bool padList(const Expr& list) {
    return std::any_of(list.kids.begin(), list.kids.end(), [](const Expr& k) {
        return k.kind == ExprKind::App || k.kind == ExprKind::Op || k.kind == ExprKind::If ||
               k.kind == ExprKind::Lambda;
    });
}

bool isBlobsCall(const Expr& e) {
    return e.kind == ExprKind::App && e.kids.size() == 2 && e.kids[0].kind == ExprKind::Var &&
           (e.kids[0].text == "blobs" || e.kids[0].text == "concat") &&
           e.kids[1].kind == ExprKind::List;
}

class Printer {
public:
    // Renders `e` whose first character sits at column `indent`.
    std::string expr(const Expr& e, int indent) {
        std::string lead;
        for (const auto& c : e.comments) lead += "; " + c + "\n" + pad(indent);
        return lead + bare(e, indent);
    }

    std::string flat(const Expr& e, bool blobList = false) {
        switch (e.kind) {
            case ExprKind::Num:
                return numText(e);
            case ExprKind::Str:
                return "'" + e.text + "'";
            case ExprKind::Bool:
                return e.boolean ? "true" : "false";
            case ExprKind::Var:
                return e.text;
            case ExprKind::List: {
                if (e.kids.empty()) return "[]";
                bool sp = blobList || padList(e);
                std::string s = sp ? "[ " : "[";
                for (size_t i = 0; i < e.kids.size(); ++i) {
                    if (i) s += ' ';
                    s += flat(e.kids[i]);
                }
                return s + (sp ? " ]" : "]");
            }
            case ExprKind::Op: {
                std::string s = "(" + e.text;
                for (const auto& k : e.kids) s += " " + flat(k);
                return s + ")";
            }
            case ExprKind::App: {
                bool blobs = isBlobsCall(e);
                std::string s = "(" + flat(e.kids[0]);
                for (size_t i = 1; i < e.kids.size(); ++i) s += " " + flat(e.kids[i], blobs);
                return s + ")";
            }
            case ExprKind::Lambda:
                return "(" + std::string(kLambda) + " " + params(e) + " " + flat(e.kids[0]) + ")";
            case ExprKind::If:
                return "(if " + flat(e.kids[0]) + " " + flat(e.kids[1]) + " " + flat(e.kids[2]) + ")";
            case ExprKind::Let:
                break;
        }
        return bare(e, 0);
    }

    std::string sequence(const Expr& e, int indent) {
        std::vector<std::string> items;
        std::vector<bool> singleDef;
        const Expr* cur = &e;
        while (isDefChain(*cur)) {
            std::string s;
            for (const auto& c : cur->comments) s += "; " + c + "\n" + pad(indent);
            s += def(*cur, indent);
            if (!cur->trailing.empty()) s += "  ; " + cur->trailing;
            singleDef.push_back(cur->comments.empty() && s.find('\n') == std::string::npos);
            items.push_back(std::move(s));
            cur = &cur->kids[1];
        }
        std::string last = expr(*cur, indent);
        if (!cur->trailing.empty()) last += "     ; " + cur->trailing;
        items.push_back(std::move(last));
        singleDef.push_back(false);

        std::string out;
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += (singleDef[i - 1] && singleDef[i]) ? "\n" : "\n\n";
            if (i) out += pad(indent);
            out += items[i];
        }
        return out;
    }

private:
    std::string params(const Expr& lam) {
        std::string s = "(";
        for (size_t i = 0; i < lam.params.size(); ++i) {
            if (i) s += ' ';
            s += patternText(lam.params[i]);
        }
        return s + ")";
    }

    std::string def(const Expr& d, int indent) {
        std::string head = "(def " + patternText(d.pat);
        const Expr& b = d.kids[0];
        if (isDefChain(b)) return head + "\n" + pad(indent + 2) + sequence(b, indent + 2) + ")";
        if (isFlat(b) && b.kind != ExprKind::Lambda) {
            std::string one = head + " " + flat(b) + ")";
            if (one.size() + static_cast<size_t>(indent) <= kLineWidth) return one;
        }
        return head + "\n" + pad(indent + 2) + expr(b, indent + 2) + ")";
    }

    std::string bare(const Expr& e, int indent) {
        if (isFlat(e)) {
            std::string f = flat(e);
            if (f.size() + static_cast<size_t>(indent) <= kLineWidth || e.isAtom()) return f;
        }
        switch (e.kind) {
            case ExprKind::Let: {
                if (e.isDef) return sequence(e, indent);
                std::string s = std::string(e.rec ? "(letrec " : "(let ") + patternText(e.pat) + " ";
                s += expr(e.kids[0], indent + static_cast<int>(s.size()));
                const Expr& body = e.kids[1];
                bool chain = body.kind == ExprKind::Let && !body.isDef && body.comments.empty();
                int bi = chain ? indent : indent + 2;
                s += "\n" + pad(bi) + expr(body, bi) + ")";
                return s;
            }
            case ExprKind::Lambda: {
                std::string s = "(" + std::string(kLambda) + " " + params(e);
                const Expr& body = e.kids[0];
                if (isDefChain(body)) return s + "\n\n" + pad(indent + 2) + sequence(body, indent + 2) + ")";
                return s + "\n" + pad(indent + 2) + expr(body, indent + 2) + ")";
            }
            case ExprKind::List: {
                bool sp = true;
                std::string s = sp ? "[ " : "[";
                for (size_t i = 0; i < e.kids.size(); ++i) {
                    if (i) s += "\n" + pad(indent + 2);
                    s += expr(e.kids[i], indent + 2);
                }
                return s + " ]";
            }
            case ExprKind::Op:
            case ExprKind::App: {
                std::string s = "(";
                size_t first = 0;
                if (e.kind == ExprKind::Op) {
                    s += e.text;
                } else {
                    s += expr(e.kids[0], indent + 1);
                    first = 1;
                }
                int argIndent = indent + 2;
                bool broke = false;
                size_t lineStart = 0;
                for (size_t i = first; i < e.kids.size(); ++i) {
                    const Expr& a = e.kids[i];
                    bool fl = isFlat(a);
                    std::string piece = fl ? flat(a, isBlobsCall(e)) : std::string();
                    size_t col = s.size() - lineStart + static_cast<size_t>(broke ? 0 : indent);
                    if (fl && !broke && col + 1 + piece.size() <= kLineWidth) {
                        s += " " + piece;
                        continue;
                    }
                    s += "\n" + pad(argIndent);
                    lineStart = s.size() - static_cast<size_t>(argIndent);
                    broke = true;
                    s += fl ? piece : expr(a, argIndent);
                }
                return s + ")";
            }
            case ExprKind::If:
                return "(if " + expr(e.kids[0], indent + 4) + "\n" + pad(indent + 2) +
                       expr(e.kids[1], indent + 2) + "\n" + pad(indent + 2) + expr(e.kids[2], indent + 2) +
                       ")";
            default:
                return flat(e);
        }
    }
};

}  // namespace

std::string numText(const Expr& n) {
    std::string s = n.text.empty() ? formatNumber(n.num) : n.text;
    if (n.annot == Annotation::Frozen) s += '!';
    if (n.annot == Annotation::Thawed) s += '?';
    return s;
}

std::string unparse(const Program& p) {
    Printer pr;
    return pr.sequence(p.root, 0) + "\n";
}

std::string unparseExpr(const Expr& e, int indent) {
    Printer pr;
    if (isDefChain(e)) return pr.sequence(e, indent);
    return pr.expr(e, indent);
}

std::set<std::string> identifiersOf(const Expr& root) {
    std::set<std::string> out;
    std::vector<std::string> names;
    forEachNode(root, [&](const Expr& e) {
        if (e.kind == ExprKind::Var) out.insert(e.text);
        if (e.kind == ExprKind::Let) e.pat.boundNames(names);
        if (e.kind == ExprKind::Lambda)
            for (const auto& p : e.params) p.boundNames(names);
    });
    out.insert(names.begin(), names.end());
    return out;
}

std::string freshName(const std::set<std::string>& taken, std::string_view base) {
    for (int i = 1;; ++i) {
        std::string cand = std::string(base) + std::to_string(i);
        if (!taken.count(cand) && !isPreludeName(cand)) return cand;
    }
}

std::string freshName(const Program& p, std::string_view base) {
    return freshName(identifiersOf(p.root), base);
}

}  // namespace sketchlab
