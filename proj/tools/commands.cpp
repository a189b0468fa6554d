#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "weil/analysis.hpp"
#include "weil/decompose.hpp"
#include "weil/errors.hpp"
#include "weil/modgroup.hpp"
#include "weil/weilrep.hpp"

namespace weil::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_or(const RunConfig& cfg, const char* fallback) { return cfg.format.empty() ? fallback : cfg.format; }

void require_format(const std::string& format, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed)
        if (format == a) return;
    throw ArgumentError("unsupported format: " + format);
}

void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw ArgumentError("cannot open output file: " + cfg.out);
    file << text;
    if (!text.empty() && text.back() != '\n') file << '\n';
}

std::string rational(const mpq_class& q)
{
    mpq_class c(q);
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Json cyclo_json(const CycloElt& z)
{
    Json j;
    j["field_order"] = z.field() ? z.field()->order() : 1;
    auto coeffs = Json::array();
    for (const auto& c : z.coeffs()) coeffs.push_back(rational(c));
    j["coefficients"] = coeffs;
    return j;
}

Json matrix_json(const RingMatrix& m)
{
    auto rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cyclo_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

std::string matrix_text(const RingMatrix& m)
{
    std::ostringstream os;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "  " : "  [") << m(i, j).to_string();
        os << "]\n";
    }
    return os.str();
}

void require_level(const RunConfig& cfg)
{
    if (cfg.level < 1) throw ArgumentError("--level is required and must be positive");
    if (cfg.genus < 1) throw ArgumentError("--genus must be positive");
}

CharSumMethod parse_method(const std::string& name)
{
    if (name == "auto") return CharSumMethod::Auto;
    if (name == "full") return CharSumMethod::FullEnumeration;
    if (name == "census") return CharSumMethod::Census;
    if (name == "classes") return CharSumMethod::Classes;
    throw ArgumentError("unknown method: " + name);
}

// Exponent vectors (x_1, y_1, ..., x_g, y_g) of total degree <= max_degree, in graded lexicographic order.
std::vector<std::vector<long>> monomials(int genus, int max_degree)
{
    std::vector<std::vector<long>> out;
    std::vector<long> cur(static_cast<std::size_t>(2 * genus), 0);
    std::function<void(std::size_t, int)> fill = [&](std::size_t pos, int left) {
        if (pos + 1 == cur.size()) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[pos] = e;
            fill(pos + 1, left - e);
        }
    };
    for (int d = 0; d <= max_degree; ++d) fill(0, d);
    return out;
}

long degree(const std::vector<long>& mono) { return std::accumulate(mono.begin(), mono.end(), 0L); }

std::string exponents_text(const std::vector<long>& mono)
{
    std::string s;
    for (std::size_t i = 0; i < mono.size(); ++i) s += (i ? " " : "") + std::to_string(mono[i]);
    return s;
}

struct Check {
    std::string suite;
    std::string name;
    std::string claim;
    bool pass = false;
    std::string detail;
};

class Verifier {
public:
    explicit Verifier(const RunConfig& cfg) : cfg_(cfg) {}

    void run(const std::string& suite)
    {
        if (suite == "census") census_suite();
        else if (suite == "charsum") charsum();
        else if (suite == "crt") crt();
        else if (suite == "tower") tower();
        else if (suite == "egorov") egorov();
        else if (suite == "semiclassical") semiclassical();
        else if (suite == "faithful") faithful();
        else if (suite == "omega") omega();
        else throw ArgumentError("unknown suite: " + suite);
    }

    const std::vector<Check>& checks() const { return checks_; }

private:
    const RunConfig& cfg_;
    std::vector<Check> checks_;

    void add(std::string suite, std::string name, std::string claim, bool pass, std::string detail)
    {
        checks_.push_back({std::move(suite), std::move(name), std::move(claim), pass, std::move(detail)});
    }

    std::vector<int> exponents() const
    {
        if (cfg_.n) return {cfg_.n};
        return {2, 3, 4, 5};
    }

    void census_suite()
    {
        for (int n : exponents()) {
            if (n < 2 || n > 6) throw ResourceError("census: n must lie in 2..6");
            const std::string tag = "n=" + std::to_string(n);
            long total = 0;
            for (const auto& row : weil::census(n, cfg_.workers)) {
                total += row.count;
                std::string name = tag + " l=" + std::to_string(row.l) + " x=" + row.x_class +
                                   " s=" + (row.s ? std::to_string(*row.s) : std::string("*"));
                add("census", name, "class count matches the closed form", row.match(),
                    std::to_string(row.count) + " vs " + (row.expected ? std::to_string(*row.expected) : "none"));
            }
            const long order = sl2_order(1L << n);
            add("census", tag + " total", "counts sum to |SL2(Z/2^n)|", total == order,
                std::to_string(total) + " vs " + std::to_string(order));
            if (n <= 3) {
                long bad = 0;
                for (const auto& r : class_representatives(n)) bad += class_size_bruteforce(r.matrix) != r.m;
                add("census", tag + " class sizes", "orbit sizes equal the tabulated m(A)", bad == 0,
                    std::to_string(bad) + " mismatches");
            }
            if (n <= 5) {
                const TraceTable table = trace_table(n);
                long bad_rows = 0, bad_diag = 0;
                for (const auto& r : table.rows) bad_rows += !(r.match() && r.constant_on_class);
                for (const auto& d : table.diagonal) bad_diag += !(d.word_matches && d.is_permutation);
                add("census", tag + " trace table", "|Tr|^2 follows the (l, x, s) table", bad_rows == 0,
                    std::to_string(table.rows.size() - static_cast<std::size_t>(bad_rows)) + "/" +
                        std::to_string(table.rows.size()) + " rows");
                add("census", tag + " diagonal lifts", "lift of diag(a, 1/a) is a scaled permutation", bad_diag == 0,
                    std::to_string(bad_diag) + " failures");
            }
        }
    }

    void charsum()
    {
        std::vector<int> levels;
        for (int p : {2, 4, 8, 16, 3, 5, 7, 9})
            if (p <= cfg_.max_level) levels.push_back(p);
        for (int p : levels) {
            const auto r = char_sum(p, CharSumMethod::Auto, cfg_.workers);
            add("charsum", "S level " + std::to_string(p), "mean |Tr|^2 equals the divisor count", r.match(),
                rational(r.value) + " vs " + std::to_string(r.expected) + " (" + method_name(r.method) + ")");
        }
        for (int a = 2; a <= 9; ++a)
            for (int b = 3; b <= 9; b += 2) {
                if (std::gcd(a, b) != 1 || (a % 2 == 1 && a >= b) || a * b > cfg_.max_level) continue;
                const auto m = char_sum_multiplicativity(a, b, cfg_.workers);
                add("charsum", "multiplicative " + std::to_string(a) + "x" + std::to_string(b),
                    "S is multiplicative on coprime levels", m.holds(),
                    rational(m.s_ab) + " vs " + rational(m.s_a) + "*" + rational(m.s_b));
            }
    }

    void crt()
    {
        const int cases[][3] = {{3, 5, 1}, {2, 3, 1}, {4, 3, 1}, {8, 3, 1}, {2, 3, 2}};
        for (const auto& c : cases) {
            if (c[0] * c[1] > cfg_.max_level) continue;
            const CrtData d = crt_check(c[0], c[1], c[2]);
            long bad = 0;
            for (const auto& g : d.checks) bad += !g.pass;
            add("crt", std::to_string(c[0]) + "x" + std::to_string(c[1]) + " g=" + std::to_string(c[2]),
                "basis permutation intertwines the tensor product", d.pass(),
                std::to_string(d.checks.size() - static_cast<std::size_t>(bad)) + "/" + std::to_string(d.checks.size()) +
                    " generators");
        }
    }

    void tower()
    {
        const int cases[][3] = {{2, 1, 1}, {2, 2, 1}, {3, 0, 1}, {3, 1, 1}, {2, 1, 2}};
        for (const auto& c : cases) {
            long big = 1;
            for (int k = 0; k < c[1] + 2; ++k) big *= c[0];
            if (big > cfg_.max_level) continue;
            const TowerData d = tower_check(c[0], c[1], c[2]);
            add("tower", "r=" + std::to_string(c[0]) + " n=" + std::to_string(c[1]) + " g=" + std::to_string(c[2]),
                "embedded smaller level and its complement are stable", d.pass(),
                std::string("independent=") + (d.independent ? "yes" : "no") + " orthogonal=" + (d.orthogonal ? "yes" : "no"));
        }
    }

    void egorov()
    {
        for (int genus = 1; genus <= 2; ++genus)
            for (int p = 2; p <= std::min(7, cfg_.max_level); ++p) {
                const WeilRep rep(p, genus);
                const std::string tag = "p=" + std::to_string(p) + " g=" + std::to_string(genus);
                long bad = 0;
                for (const auto& t : rep.tags()) {
                    try {
                        bad += !egorov_map(rep, t).ok();
                    } catch (const DefectError&) {
                        ++bad;
                    }
                }
                add("egorov", tag + " lattice maps", "each generator induces a symplectic lattice map", bad == 0,
                    std::to_string(bad) + " failures");
                const int dim = schrodinger_commutant_dimension(rep);
                add("egorov", tag + " commutant", "the Schrodinger image has a scalar commutant", dim == 1,
                    "dimension " + std::to_string(dim));
            }
    }

    void semiclassical()
    {
        const auto monos = monomials(1, 4);
        for (int p = 3; p <= std::min(16, cfg_.max_level); ++p) {
            long bad = 0, tested = 0;
            for (const auto& r : semiclassical_traces(p, 1, monos)) {
                if (degree(r.exponents) >= p) continue;
                ++tested;
                bad += r.gap != 0;
            }
            add("semiclassical", "level " + std::to_string(p), "normalised traces equal the classical integrals",
                bad == 0, std::to_string(tested - bad) + "/" + std::to_string(tested) + " monomials exact");
        }
    }

    void omega()
    {
        const std::vector<int> levels = cfg_.level ? std::vector<int>{cfg_.level} : std::vector<int>{4, 8, 9};
        for (int p : levels) {
            if (p > cfg_.max_level) continue;
            const OmegaFamily f = omega_family(p, 1);
            add("omega", "p=" + std::to_string(p), "sigma(p) independent operators commute with the representation",
                f.pass(),
                std::to_string(f.operators.size()) + " operators, rank " + std::to_string(f.rank) + ", sigma " +
                    std::to_string(f.expected));
        }
    }

    void faithful()
    {
        for (int p : {3, 5, 7}) {
            if (p > cfg_.max_level) continue;
            const auto r = kernel_check(p);
            add("faithful", "p=" + std::to_string(p), "the lift is projectively injective",
                r.injective() && r.minus_identity_distinct,
                std::to_string(r.projective_classes) + "/" + std::to_string(r.elements) + " classes");
        }
    }
};

}  // namespace

int cmd_gauss(const RunConfig& cfg, long a, long b, int level)
{
    if (level < 1) throw ArgumentError("gauss: level must be positive");
    const CycloElt g = gauss_sum(a, b, level);
    const CycloElt n = g.norm_sq();
    const std::string format = fmt_or(cfg, "json");
    require_format(format, {"json", "text"});
    if (format == "text") {
        emit(cfg, "G(" + std::to_string(a) + "," + std::to_string(b) + ") at level " + std::to_string(level) + " = " +
                      g.to_string() + "\nnorm_sq = " + n.to_string() + "\n");
        return kOk;
    }
    Json j;
    j["a"] = a;
    j["b"] = b;
    j["level"] = level;
    j["value"] = cyclo_json(g);
    j["norm_sq"] = n.is_rational() ? Json(rational(n.to_rational())) : cyclo_json(n);
    emit(cfg, j.dump(2));
    return kOk;
}

int cmd_rep_show(const RunConfig& cfg)
{
    require_level(cfg);
    const WeilRep rep(cfg.level, cfg.genus);
    if (rep.dim() > 64) throw ResourceError("rep show: dimension above 64");
    const std::string format = fmt_or(cfg, "text");
    require_format(format, {"json", "text"});
    if (format == "text") {
        std::ostringstream os;
        os << "level " << rep.level() << ", genus " << rep.genus() << ", dimension " << rep.dim() << ", A of order "
           << rep.root_order() << " in Q(zeta_" << rep.field()->order() << ")\n";
        for (const auto& t : rep.tags()) os << t.name() << ":\n" << matrix_text(rep.generator(t));
        emit(cfg, os.str());
        return kOk;
    }
    Json j;
    j["level"] = rep.level();
    j["genus"] = rep.genus();
    j["dim"] = rep.dim();
    j["root_order"] = rep.root_order();
    j["field_order"] = rep.field()->order();
    auto gens = Json::array();
    for (const auto& t : rep.tags()) {
        Json g;
        g["name"] = t.name();
        g["matrix"] = matrix_json(rep.generator(t));
        gens.push_back(g);
    }
    j["generators"] = gens;
    emit(cfg, j.dump(2));
    return kOk;
}

int cmd_decompose(const RunConfig& cfg)
{
    require_level(cfg);
    const DecompositionTree tree = decomposition_tree(cfg.level, cfg.genus);
    const int commutant = commutant_dimension(cfg.level, cfg.genus);
    const long leaves = static_cast<long>(tree.factors.size());
    long reference = leaves;
    if (cfg.genus == 1) reference = expected_factor_count(cfg.level);
    const bool ok = commutant == leaves && reference == leaves;

    Json j = Json::parse(tree.to_json());
    j["commutant_dimension"] = commutant;
    j["match"] = ok;
    if (cfg.delta) {
        const OmegaOperator omega = omega_projector(cfg.delta, cfg.level, cfg.genus);
        Json o;
        o["delta"] = omega.delta;
        o["orbit_size"] = omega.orbit_size;
        o["commutes"] = omega.commutes;
        o["zero"] = is_zero_matrix(omega.matrix);
        j["omega"] = o;
    }
    const std::string format = fmt_or(cfg, "json");
    require_format(format, {"json", "text"});
    if (format == "json") {
        emit(cfg, j.dump(2));
    } else {
        std::ostringstream os;
        os << "level " << tree.level << ", genus " << tree.genus << ": " << leaves << " factors, commutant dimension "
           << commutant << (ok ? "" : " (MISMATCH)") << "\n";
        for (const auto& f : tree.factors) {
            os << "  ";
            for (std::size_t k = 0; k < f.tensor.size(); ++k) {
                const auto& l = f.tensor[k];
                os << (k ? " (x) " : "") << l.kind << "_" << l.prime_power << (l.parity == "none" ? "" : l.parity);
            }
            os << "  dim " << f.dim() << "\n";
        }
        emit(cfg, os.str());
    }
    return ok ? kOk : kMismatch;
}

int cmd_charsum(const RunConfig& cfg)
{
    require_level(cfg);
    const CharSumReport r = char_sum(cfg.level, parse_method(cfg.method), cfg.workers);
    const std::string format = fmt_or(cfg, "json");
    require_format(format, {"json", "text"});
    if (format == "text") {
        emit(cfg, "S at level " + std::to_string(r.level) + " (mod " + std::to_string(r.modulus) + ") = " +
                      rational(r.value) + ", expected " + std::to_string(r.expected) + " [" + method_name(r.method) + "]\n");
    } else {
        Json j;
        j["level"] = r.level;
        j["modulus"] = r.modulus;
        j["method"] = method_name(r.method);
        j["terms"] = r.class_count;
        j["value"] = rational(r.value);
        j["expected"] = r.expected;
        j["match"] = r.match();
        emit(cfg, j.dump(2));
    }
    return r.match() ? kOk : kMismatch;
}

int cmd_census(const RunConfig& cfg)
{
    const int n = cfg.n ? cfg.n : 3;
    if (n < 2 || n > 6) throw ResourceError("census: n must lie in 2..6");
    const std::string format = fmt_or(cfg, "csv");
    require_format(format, {"json", "csv"});
    bool ok = true;
    std::string text;
    if (cfg.traces) {
        const TraceTable table = trace_table(n);
        ok = table.all_match();
        if (format == "csv") {
            text = table.to_csv();
        } else {
            Json j;
            j["n"] = n;
            auto rows = Json::array();
            for (const auto& r : table.rows) {
                Json row;
                row["l"] = r.l;
                row["x_class"] = r.x_class;
                row["s"] = r.s;
                row["representative"] = r.representative;
                row["measured"] = rational(r.measured);
                row["expected"] = r.expected ? Json(rational(*r.expected)) : Json();
                row["match"] = r.match();
                rows.push_back(row);
            }
            j["rows"] = rows;
            j["all_match"] = ok;
            text = j.dump(2);
        }
    } else {
        const auto rows = census(n, cfg.workers);
        for (const auto& r : rows) ok = ok && r.match();
        if (format == "csv") {
            text = census_csv(n, rows);
        } else {
            Json j;
            j["n"] = n;
            auto arr = Json::array();
            for (const auto& r : rows) {
                Json row;
                row["l"] = r.l;
                row["x_class"] = r.x_class;
                row["s"] = r.s ? Json(*r.s) : Json();
                row["count"] = r.count;
                row["expected"] = r.expected ? Json(*r.expected) : Json();
                row["match"] = r.match();
                arr.push_back(row);
            }
            j["rows"] = arr;
            j["all_match"] = ok;
            text = j.dump(2);
        }
    }
    emit(cfg, text);
    return ok ? kOk : kMismatch;
}

int cmd_orbits(const RunConfig& cfg)
{
    require_level(cfg);
    const OrbitCensus c = orbit_census(cfg.level, cfg.genus);
    const std::string format = fmt_or(cfg, "json");
    require_format(format, {"json", "text"});
    if (format == "text") {
        std::ostringstream os;
        os << c.count << " orbits on (Z/" << cfg.level << ")^" << 2 * cfg.genus << ", expected " << c.expected << "\n";
        for (std::size_t k = 0; k < c.deltas.size(); ++k)
            os << "  delta " << c.deltas[k] << ": size " << c.sizes[k] << "\n";
        emit(cfg, os.str());
    } else {
        Json j;
        j["modulus"] = cfg.level;
        j["genus"] = cfg.genus;
        j["count"] = c.count;
        j["expected"] = c.expected;
        j["representatives_ok"] = c.representatives_ok;
        auto arr = Json::array();
        for (std::size_t k = 0; k < c.deltas.size(); ++k) {
            Json o;
            o["delta"] = c.deltas[k];
            o["size"] = c.sizes[k];
            o["representative"] = c.representatives[k];
            arr.push_back(o);
        }
        j["orbits"] = arr;
        emit(cfg, j.dump(2));
    }
    return c.match() ? kOk : kMismatch;
}

int cmd_semiclassical(const RunConfig& cfg)
{
    if (cfg.genus < 1) throw ArgumentError("--genus must be positive");
    const int first = cfg.level ? cfg.level : 3;
    const int last = cfg.level ? cfg.level : cfg.max_level;
    if (first < 1 || last < first) throw ArgumentError("semiclassical: empty level range");
    const auto monos = monomials(cfg.genus, 4);
    const std::string format = fmt_or(cfg, "csv");
    require_format(format, {"json", "csv"});
    bool ok = true;
    std::ostringstream csv;
    csv << "level,genus,exponents,degree,value,target,gap\n";
    auto arr = Json::array();
    for (int p = first; p <= last; ++p)
        for (const auto& r : semiclassical_traces(p, cfg.genus, monos)) {
            const long deg = degree(r.exponents);
            if (deg < p) ok = ok && r.gap == 0;
            csv << r.level << "," << r.genus << "," << exponents_text(r.exponents) << "," << deg << ","
                << rational(r.value) << "," << rational(r.target) << "," << rational(r.gap) << "\n";
            Json row;
            row["level"] = r.level;
            row["genus"] = r.genus;
            row["exponents"] = r.exponents;
            row["value"] = rational(r.value);
            row["target"] = rational(r.target);
            row["gap"] = rational(r.gap);
            arr.push_back(row);
        }
    emit(cfg, format == "csv" ? csv.str() : arr.dump(2));
    return ok ? kOk : kMismatch;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites)
{
    static const std::vector<std::string> all = {"census", "charsum", "crt", "tower", "egorov", "semiclassical", "faithful"};
    std::vector<std::string> selected;
    for (const auto& s : suites.empty() ? std::vector<std::string>{"all"} : suites) {
        if (s == "all") selected.insert(selected.end(), all.begin(), all.end());
        else if (s == "omega" || std::find(all.begin(), all.end(), s) != all.end()) selected.push_back(s);
        else throw ArgumentError("unknown suite: " + s);
    }
    const std::string format = fmt_or(cfg, "text");
    require_format(format, {"json", "text"});
    Verifier v(cfg);
    for (const auto& s : selected) v.run(s);

    long failed = 0;
    for (const auto& c : v.checks()) failed += !c.pass;
    if (format == "text") {
        std::ostringstream os;
        for (const auto& c : v.checks())
            os << (c.pass ? "PASS " : "FAIL ") << c.suite << " | " << c.name << " | " << c.claim << " | " << c.detail << "\n";
        os << v.checks().size() - static_cast<std::size_t>(failed) << "/" << v.checks().size() << " checks passed\n";
        emit(cfg, os.str());
    } else {
        Json j;
        auto arr = Json::array();
        for (const auto& c : v.checks()) {
            Json e;
            e["suite"] = c.suite;
            e["name"] = c.name;
            e["claim"] = c.claim;
            e["pass"] = c.pass;
            e["detail"] = c.detail;
            arr.push_back(e);
        }
        j["checks"] = arr;
        j["passed"] = static_cast<long>(v.checks().size()) - failed;
        j["failed"] = failed;
        emit(cfg, j.dump(2));
    }
    return failed ? kMismatch : kOk;
}

}  // namespace weil::cli
