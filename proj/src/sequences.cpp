#include "stripwave/sequences.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

// Coefficient container format (text, line oriented):
//
//   stripwave-seq 1
//   kind float|interval
//   c <hex-float>
//   d1 <hex-float>
//   d2 <hex-float>
//   n1max <int>
//   n2max <int>
//   <one line per n1 row; float rows hold n2max+1 entries,
//    interval rows hold lo/hi pairs>
//
// Hex floats (%a / strtod) round-trip doubles bit-exactly, so save->load is
// the identity on the stored values.

namespace stripwave {

namespace {

std::string hexf(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hexf(const std::string& tok) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw FormatError("bad numeric token '" + tok + "' in coefficient file");
    return v;
}

std::string expect_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(std::string("truncated coefficient file: missing ") + what);
    return line;
}

// "key value" header line
std::string header_value(const std::string& line, const char* key) {
    std::istringstream ss(line);
    std::string k, v;
    ss >> k >> v;
    if (k != key || v.empty())
        throw FormatError(std::string("coefficient file: expected '") + key + " <value>' line, got '" + line + "'");
    return v;
}

struct SeqHeader {
    std::string kind;
    double c, d1, d2;
    int n1max, n2max;
};

SeqHeader read_header(std::istream& in, const std::string& path) {
    std::string magic = expect_line(in, "magic");
    if (magic != "stripwave-seq 1")
        throw FormatError(path + ": not a coefficient file (bad magic line '" + magic + "')");
    SeqHeader h;
    h.kind = header_value(expect_line(in, "kind"), "kind");
    if (h.kind != "float" && h.kind != "interval")
        throw FormatError(path + ": unknown scalar kind '" + h.kind + "'");
    h.c = parse_hexf(header_value(expect_line(in, "c"), "c"));
    h.d1 = parse_hexf(header_value(expect_line(in, "d1"), "d1"));
    h.d2 = parse_hexf(header_value(expect_line(in, "d2"), "d2"));
    h.n1max = int(parse_hexf(header_value(expect_line(in, "n1max"), "n1max")));
    h.n2max = int(parse_hexf(header_value(expect_line(in, "n2max"), "n2max")));
    if (h.n1max < 0 || h.n2max < 0 || h.n1max > 1 << 20 || h.n2max > 1 << 20)
        throw FormatError(path + ": implausible coefficient box");
    return h;
}

void write_header(std::ostream& out, const char* kind, double c, double d1, double d2, IndexBox box) {
    out << "stripwave-seq 1\n"
        << "kind " << kind << "\n"
        << "c " << hexf(c) << "\n"
        << "d1 " << hexf(d1) << "\n"
        << "d2 " << hexf(d2) << "\n"
        << "n1max " << box.n1max << "\n"
        << "n2max " << box.n2max << "\n";
}

std::vector<double> row_tokens(std::istream& in, int expected, const std::string& path) {
    std::string line = expect_line(in, "data row");
    std::istringstream ss(line);
    std::vector<double> vals;
    vals.reserve(expected);
    std::string tok;
    while (ss >> tok) vals.push_back(parse_hexf(tok));
    if (int(vals.size()) != expected)
        throw FormatError(path + ": data row holds " + std::to_string(vals.size()) +
                          " values, expected " + std::to_string(expected));
    return vals;
}

} // namespace

std::string seq_kind_on_disk(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open coefficient file " + path);
    return read_header(in, path).kind;
}

template <>
void save_seq<double>(const std::string& path, const CoeffSeq<double>& u, double c) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write coefficient file " + path);
    write_header(out, "float", c, u.d1, u.d2, u.box);
    for (int i = 0; i <= u.box.n1max; ++i) {
        for (int j = 0; j <= u.box.n2max; ++j) {
            if (j) out << ' ';
            out << hexf(u.at(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failure on " + path);
}

template <>
void save_seq<IScalar>(const std::string& path, const CoeffSeq<IScalar>& u, double c) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write coefficient file " + path);
    write_header(out, "interval", c, u.d1, u.d2, u.box);
    for (int i = 0; i <= u.box.n1max; ++i) {
        for (int j = 0; j <= u.box.n2max; ++j) {
            if (j) out << ' ';
            out << hexf(u.at(i, j).lo()) << ' ' << hexf(u.at(i, j).hi());
        }
        out << '\n';
    }
    if (!out) throw IoError("write failure on " + path);
}

template <>
CoeffSeq<double> load_seq<double>(const std::string& path, double& c_out) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open coefficient file " + path);
    SeqHeader h = read_header(in, path);
    if (h.kind != "float")
        throw FormatError(path + ": holds " + h.kind + " data, expected float");
    CoeffSeq<double> u(IndexBox{h.n1max, h.n2max}, h.d1, h.d2);
    c_out = h.c;
    for (int i = 0; i <= h.n1max; ++i) {
        auto vals = row_tokens(in, h.n2max + 1, path);
        for (int j = 0; j <= h.n2max; ++j) u.at(i, j) = vals[j];
    }
    return u;
}

template <>
CoeffSeq<IScalar> load_seq<IScalar>(const std::string& path, double& c_out) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open coefficient file " + path);
    SeqHeader h = read_header(in, path);
    if (h.kind != "interval")
        throw FormatError(path + ": holds " + h.kind + " data, expected interval");
    CoeffSeq<IScalar> u(IndexBox{h.n1max, h.n2max}, h.d1, h.d2);
    c_out = h.c;
    for (int i = 0; i <= h.n1max; ++i) {
        auto vals = row_tokens(in, 2 * (h.n2max + 1), path);
        for (int j = 0; j <= h.n2max; ++j) u.at(i, j) = IScalar(vals[2 * j], vals[2 * j + 1]);
    }
    return u;
}

} // namespace stripwave
