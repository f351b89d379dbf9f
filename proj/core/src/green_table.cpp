#include "membrane/green_table.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>

#include "membrane/errors.hpp"
#include "membrane/green.hpp"

namespace membrane {

namespace {

constexpr char kMagic[4] = {'M', 'P', 'G', 'T'};
constexpr uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw NumericError("green table cache: truncated file");
    return v;
}

}  // namespace

const char* green_kind_name(GreenKind k) {
    switch (k) {
        case GreenKind::simple: return "simple";
        case GreenKind::bilaplacian: return "bilaplacian";
        case GreenKind::dirichlet_GN: return "dirichlet_GN";
        case GreenKind::killed_gN: return "killed_gN";
        case GreenKind::bar_GN: return "bar_GN";
    }
    return "?";
}

const GreenEntry& GreenTable::entry(const LatticeVector& x) const {
    if (!translation_invariant())
        throw PreconditionError("GreenTable: offset lookup on a finite-volume table");
    const auto it = offsets.find(canonical_offset(x));
    if (it == offsets.end()) throw PreconditionError("GreenTable: offset outside table window");
    return it->second;
}

const GreenEntry& GreenTable::entry_pair(const LatticeVector& x, const LatticeVector& y) const {
    auto it = pairs.find({x, y});
    if (it == pairs.end()) it = pairs.find({y, x});
    if (it == pairs.end()) throw PreconditionError("GreenTable: pair not stored");
    return it->second;
}

std::string GreenTable::cache_name(GreenKind kind, int d, int radius, double tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s_d%d_r%d_tol%.3e.mpgt", green_kind_name(kind), d, radius,
                  tol);
    return buf;
}

void GreenTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("green table cache: cannot write " + path);
    out.write(kMagic, 4);
    put(out, kVersion);
    put(out, uint8_t(kind));
    put(out, uint16_t(d));
    put(out, uint16_t(radius));
    put(out, tol);
    const uint64_t count = translation_invariant() ? offsets.size() : pairs.size();
    put(out, count);
    if (translation_invariant()) {
        for (const auto& [off, e] : offsets) {
            for (int c : off) put(out, int32_t(c));
            put(out, e.value);
            put(out, e.error);
        }
    } else {
        for (const auto& [xy, e] : pairs) {
            for (int c : xy.first) put(out, int32_t(c));
            for (int c : xy.second) put(out, int32_t(c));
            put(out, e.value);
            put(out, e.error);
        }
    }
}

GreenTable GreenTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("green table cache: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw NumericError("green table cache: bad magic");
    if (take<uint16_t>(in) != kVersion) throw NumericError("green table cache: bad version");
    GreenTable t;
    t.kind = GreenKind(take<uint8_t>(in));
    t.d = take<uint16_t>(in);
    t.radius = take<uint16_t>(in);
    t.tol = take<double>(in);
    const uint64_t count = take<uint64_t>(in);
    for (uint64_t i = 0; i < count; ++i) {
        if (t.translation_invariant()) {
            LatticeVector off = LatticeVector(size_t(t.d));
            for (int& c : off) c = take<int32_t>(in);
            GreenEntry e{take<double>(in), take<double>(in)};
            t.offsets.emplace(std::move(off), e);
        } else {
            LatticeVector x = LatticeVector(size_t(t.d)), y(size_t(t.d));
            for (int& c : x) c = take<int32_t>(in);
            for (int& c : y) c = take<int32_t>(in);
            GreenEntry e{take<double>(in), take<double>(in)};
            t.pairs.emplace(std::make_pair(std::move(x), std::move(y)), e);
        }
    }
    return t;
}

std::vector<LatticeVector> canonical_offsets_upto(int d, int radius) {
    std::vector<LatticeVector> out;
    LatticeVector cur(size_t(d), 0);
    // enumerate nonincreasing sequences over {0..radius}
    const std::function<void(int, int)> rec = [&](int pos, int maxv) {
        if (pos == d) {
            out.push_back(cur);
            return;
        }
        for (int v = maxv; v >= 0; --v) {
            cur[size_t(pos)] = v;
            rec(pos + 1, v);
        }
    };
    rec(0, radius);
    return out;
}

GreenTable build_green_table(GreenKind kind, int d, int radius, double tol) {
    if (kind != GreenKind::simple && kind != GreenKind::bilaplacian)
        throw PreconditionError("build_green_table: quadrature build is for g and G only");
    GreenTable t;
    t.kind = kind;
    t.d = d;
    t.radius = radius;
    t.tol = tol;
    const QuadratureSpec spec = kind == GreenKind::simple ? auto_spec_simple(d, tol)
                                                          : auto_spec_bilaplacian(d, tol);
    for (const LatticeVector& off : canonical_offsets_upto(d, radius)) {
        const GreenValue v = kind == GreenKind::simple ? green_simple(off, spec)
                                                       : green_bilaplacian(off, spec);
        t.offsets.emplace(off, GreenEntry{v.value, v.error});
    }
    return t;
}

}  // namespace membrane
