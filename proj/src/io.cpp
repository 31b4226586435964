#include "scdec/io.hpp"

#include <sstream>

namespace scdec {

namespace {

const char kPauliChars[] = "IXZY";  // indexed by the packed frame bits

int pauli_from_char(char c, int line) {
    switch (c) {
        case 'I': return kPauliI;
        case 'X': return kPauliX;
        case 'Z': return kPauliZ;
        case 'Y': return kPauliY;
        default: throw ParseError(line, std::string("invalid Pauli character '") + c + "'");
    }
}

struct LineReader {
    std::istream& in;
    int line = 0;

    bool next(std::string& out) {
        while (std::getline(in, out)) {
            ++line;
            if (!out.empty() && out.back() == '\r') out.pop_back();
            if (out.empty() || out[0] == '#') continue;
            return true;
        }
        return false;
    }

    std::string expect() {
        std::string s;
        if (!next(s)) throw ParseError(line + 1, "unexpected end of file");
        return s;
    }
};

int expect_int_field(std::istringstream& is, const char* what, int line) {
    int v;
    if (!(is >> v)) throw ParseError(line, std::string("expected ") + what);
    return v;
}

}  // namespace

std::string write_syndrome(const CodeLayout& layout, const SyndromeTensor& tensor) {
    std::ostringstream os;
    os << "scdec-syndrome v1\n";
    os << "d " << layout.d << "\n";
    os << "layers " << tensor.layers << "\n";
    for (int t = 0; t < tensor.layers; ++t) {
        os << "x";
        for (int8_t b : tensor.x_diff[t]) os << " " << static_cast<int>(b);
        os << "\n";
    }
    for (int t = 0; t < tensor.layers; ++t) {
        os << "z";
        for (int8_t b : tensor.z_diff[t]) os << " " << static_cast<int>(b);
        os << "\n";
    }
    return os.str();
}

SyndromeTensor read_syndrome(std::istream& in, int& d_out) {
    LineReader rd{in};
    if (rd.expect() != "scdec-syndrome v1")
        throw ParseError(rd.line, "expected 'scdec-syndrome v1' header");

    auto header_int = [&rd](const char* key) {
        std::istringstream is(rd.expect());
        std::string k;
        is >> k;
        if (k != key) throw ParseError(rd.line, std::string("expected '") + key + "' line");
        return expect_int_field(is, key, rd.line);
    };
    const int d = header_int("d");
    const int layers = header_int("layers");
    if (d < 2) throw ParseError(rd.line, "d must be >= 2");
    if (layers < 1) throw ParseError(rd.line, "layers must be >= 1");
    d_out = d;
    const int nv = d * (d - 1), nf = d * (d - 1);

    SyndromeTensor t;
    t.layers = layers;
    auto read_sector = [&](const char* tag, int count) {
        std::vector<std::vector<int8_t>> diff(layers, std::vector<int8_t>(count));
        for (int l = 0; l < layers; ++l) {
            std::istringstream is(rd.expect());
            std::string k;
            is >> k;
            if (k != tag) throw ParseError(rd.line, std::string("expected '") + tag + "' layer");
            for (int c = 0; c < count; ++c) {
                int v;
                if (!(is >> v) || (v != 1 && v != -1))
                    throw ParseError(rd.line, "expected +1/-1 syndrome bits");
                diff[l][c] = static_cast<int8_t>(v);
            }
            int extra;
            if (is >> extra) throw ParseError(rd.line, "too many syndrome bits on line");
        }
        return diff;
    };
    t.x_diff = read_sector("x", nv);
    t.z_diff = read_sector("z", nf);

    auto undiff = [layers](const std::vector<std::vector<int8_t>>& diff) {
        std::vector<std::vector<int8_t>> raw(layers);
        for (int l = 0; l < layers; ++l) {
            raw[l] = diff[l];
            if (l > 0)
                for (size_t i = 0; i < raw[l].size(); ++i) raw[l][i] *= raw[l - 1][i];
        }
        return raw;
    };
    t.x_raw = undiff(t.x_diff);
    t.z_raw = undiff(t.z_diff);
    return t;
}

std::string write_history(const ErrorHistory& history) {
    std::ostringstream os;
    os << "scdec-history v1\n";
    os << "model " << noise_model_name(history.model) << "\n";
    os << "num_data " << history.num_data << "\n";
    os << "rounds " << history.rounds << "\n";
    auto frame_line = [&os](const char* tag, int t, const std::vector<uint8_t>& frame) {
        os << tag;
        if (t > 0) os << " " << t;
        os << " ";
        for (uint8_t f : frame) os << kPauliChars[f & 3];
        os << "\n";
    };
    auto flip_line = [&os](const char* tag, int t, const std::vector<uint8_t>& flips) {
        os << tag << " " << t;
        for (uint8_t f : flips) os << " " << static_cast<int>(f);
        os << "\n";
    };
    for (int t = 0; t < history.rounds; ++t) {
        frame_line("frame", t + 1, history.frame_at_round[t]);
        flip_line("xflip", t + 1, history.x_meas_flip[t]);
        flip_line("zflip", t + 1, history.z_meas_flip[t]);
    }
    frame_line("final", 0, history.final_frame);
    return os.str();
}

ErrorHistory read_history(std::istream& in) {
    LineReader rd{in};
    if (rd.expect() != "scdec-history v1")
        throw ParseError(rd.line, "expected 'scdec-history v1' header");

    ErrorHistory h;
    {
        std::istringstream is(rd.expect());
        std::string k, v;
        is >> k >> v;
        if (k != "model") throw ParseError(rd.line, "expected 'model' line");
        if (v == "code_capacity")
            h.model = NoiseModel::code_capacity;
        else if (v == "phenomenological")
            h.model = NoiseModel::phenomenological;
        else if (v == "circuit_level")
            h.model = NoiseModel::circuit_level;
        else
            throw ParseError(rd.line, "unknown noise model '" + v + "'");
    }
    auto header_int = [&rd](const char* key) {
        std::istringstream is(rd.expect());
        std::string k;
        is >> k;
        if (k != key) throw ParseError(rd.line, std::string("expected '") + key + "' line");
        return expect_int_field(is, key, rd.line);
    };
    h.num_data = header_int("num_data");
    h.rounds = header_int("rounds");
    if (h.num_data < 1 || h.rounds < 1) throw ParseError(rd.line, "bad header sizes");

    auto parse_frame = [&](const std::string& body) {
        if (static_cast<int>(body.size()) != h.num_data)
            throw ParseError(rd.line, "frame length != num_data");
        std::vector<uint8_t> frame(h.num_data);
        for (int q = 0; q < h.num_data; ++q)
            frame[q] = static_cast<uint8_t>(pauli_from_char(body[q], rd.line));
        return frame;
    };
    auto parse_flips = [&](std::istringstream& is) {
        std::vector<uint8_t> flips;
        int v;
        while (is >> v) {
            if (v != 0 && v != 1) throw ParseError(rd.line, "flips must be 0/1");
            flips.push_back(static_cast<uint8_t>(v));
        }
        return flips;
    };

    h.frame_at_round.resize(h.rounds);
    h.x_meas_flip.resize(h.rounds);
    h.z_meas_flip.resize(h.rounds);
    for (int t = 0; t < h.rounds; ++t) {
        auto read_tagged = [&](const char* tag) {
            std::istringstream is(rd.expect());
            std::string k;
            int tt;
            is >> k >> tt;
            if (k != tag || tt != t + 1)
                throw ParseError(rd.line, std::string("expected '") + tag + " " +
                                              std::to_string(t + 1) + "'");
            return is;
        };
        {
            std::istringstream is = read_tagged("frame");
            std::string body;
            is >> body;
            h.frame_at_round[t] = parse_frame(body);
        }
        {
            std::istringstream is = read_tagged("xflip");
            h.x_meas_flip[t] = parse_flips(is);
        }
        {
            std::istringstream is = read_tagged("zflip");
            h.z_meas_flip[t] = parse_flips(is);
        }
    }
    {
        std::istringstream is(rd.expect());
        std::string k, body;
        is >> k >> body;
        if (k != "final") throw ParseError(rd.line, "expected 'final' line");
        h.final_frame = parse_frame(body);
    }
    return h;
}

std::string write_events(const DetectedErrors& detected) {
    std::ostringstream os;
    os << "scdec-events v1\n";
    os << "feasible " << (detected.constraints_satisfied ? 1 : 0) << "\n";
    auto dump_sector = [&os](const char* prefix, const SectorEvents& ev) {
        for (size_t t = 0; t < ev.data.size(); ++t) {
            bool any = false;
            for (uint8_t b : ev.data[t]) any |= b;
            if (!any) continue;
            os << prefix << "data " << t + 1;
            for (size_t q = 0; q < ev.data[t].size(); ++q)
                if (ev.data[t][q]) os << " " << q;
            os << "\n";
        }
        for (size_t g = 0; g < ev.meas.size(); ++g) {
            bool any = false;
            for (uint8_t b : ev.meas[g]) any |= b;
            if (!any) continue;
            os << prefix << "meas " << g + 1;
            for (size_t c = 0; c < ev.meas[g].size(); ++c)
                if (ev.meas[g][c]) os << " " << c;
            os << "\n";
        }
    };
    if (detected.z) dump_sector("z", *detected.z);
    if (detected.x) dump_sector("x", *detected.x);
    return os.str();
}

std::map<std::string, std::pair<int, std::string>> parse_key_values(std::istream& in) {
    std::map<std::string, std::pair<int, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, "empty key");
        if (out.count(key))
            throw ParseError(lineno, "duplicate key '" + key + "' (first on line " +
                                         std::to_string(out[key].first) + ")");
        out[key] = {lineno, value};
    }
    return out;
}

}  // namespace scdec
