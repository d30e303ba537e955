#include "upslope/literal.hpp"

#include <cctype>
#include <stdexcept>

namespace upslope {

namespace {

struct Parser {
    const std::string& s;
    std::size_t i = 0;

    explicit Parser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    // Parses a decimal number reduced modulo mod (exact for any length).
    std::uint64_t number(std::uint64_t mod) {
        skip_ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("cyclo literal: expected a number at '" + s.substr(i) + "'");
        unsigned __int128 v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = (v * 10 + static_cast<unsigned>(s[i] - '0')) % mod;
            ++i;
        }
        return static_cast<std::uint64_t>(v);
    }
};

}  // namespace

CycloElt parse_cyclo(const PadicContext* ctx, const std::string& text) {
    Parser ps(text);
    const std::uint64_t M = ctx->modulus();
    std::vector<std::uint64_t> zc(ctx->e, 0);  // accumulate in the zeta basis

    bool first = true;
    while (!ps.eof()) {
        int sign = 1;
        if (ps.accept('+')) sign = 1;
        else if (ps.accept('-')) sign = -1;
        else if (!first)
            throw std::invalid_argument("cyclo literal: expected '+' or '-' in '" + text + "'");
        first = false;

        std::uint64_t coeff = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(ps.peek()))) {
            coeff = ps.number(M);
            have_coeff = true;
        }
        std::uint64_t zexp = 0;
        bool have_z = false;
        ps.skip_ws();
        if (ps.accept('*')) {
            if (ps.peek() != 'z')
                throw std::invalid_argument("cyclo literal: expected z after '*'");
        }
        if (ps.accept('z')) {
            have_z = true;
            zexp = ps.accept('^') ? ps.number(ctx->cyclo_order == 0 ? 1 : ctx->cyclo_order) : 1;
        }
        if (!have_coeff && !have_z)
            throw std::invalid_argument("cyclo literal: empty term in '" + text + "'");

        if (have_z) {
            std::uint64_t j = zexp % ctx->cyclo_order;
            const auto& row = ctx->zeta_pow_row(j);
            for (int k = 0; k < ctx->e; ++k) {
                std::uint64_t add = mulmod(coeff, row[k], M);
                zc[k] = sign > 0 ? addmod(zc[k], add, M) : submod(zc[k], add, M);
            }
        } else {
            zc[0] = sign > 0 ? addmod(zc[0], coeff, M) : submod(zc[0], coeff, M);
        }
    }

    // zeta basis -> pi basis
    std::vector<std::uint64_t> pc(ctx->e, 0);
    const auto& z2pi = ctx->zeta_to_pi();
    for (int j = 0; j < ctx->e; ++j) {
        if (zc[j] == 0) continue;
        for (int k = 0; k < ctx->e; ++k)
            pc[k] = addmod(pc[k], mulmod(zc[j], z2pi[j][k], M), M);
    }
    return CycloElt::from_pi_coeffs(ctx, pc, ctx->prec);
}

std::string format_cyclo(const CycloElt& x) {
    const PadicContext* ctx = x.ctx();
    const std::uint64_t mk = ctx->pk(x.known_prec());
    auto zc = x.zeta_coeffs();
    std::string out;
    for (int j = ctx->e - 1; j >= 0; --j) {
        std::uint64_t c = zc[j] % mk;
        if (c == 0) continue;
        bool neg = c > mk / 2;
        std::uint64_t mag = neg ? mk - c : c;
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (j == 0) {
            out += std::to_string(mag);
        } else {
            if (mag != 1) out += std::to_string(mag) + "*";
            out += "z";
            if (j > 1) out += "^" + std::to_string(j);
        }
    }
    if (out.empty()) out = "0";
    return out;
}

}  // namespace upslope
