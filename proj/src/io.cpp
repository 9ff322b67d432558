#include "hypercsi/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace hypercsi::io {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'D', '1'};

void put_u32(std::ostream& out, uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

uint32_t get_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    return static_cast<uint32_t>(bytes[0]) | (static_cast<uint32_t>(bytes[1]) << 8) |
           (static_cast<uint32_t>(bytes[2]) << 16) | (static_cast<uint32_t>(bytes[3]) << 24);
}

MatrixXd parse_csv(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* cursor = line.c_str();
        char* end = nullptr;
        for (;;) {
            const double v = std::strtod(cursor, &end);
            if (end == cursor)
                throw ShapeMismatch("malformed CSV value in " + name);
            row.push_back(v);
            while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
            if (*end == '\0') break;
            if (*end != ',') throw ShapeMismatch("malformed CSV separator in " + name);
            cursor = end + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ShapeMismatch("ragged CSV rows in " + name);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ShapeMismatch("empty CSV file " + name);

    MatrixXd m(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows.front().size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

}  // namespace

void write_dataset(const std::filesystem::path& path, const SpectralDataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(kMagic, 4);
    put_u32(out, static_cast<uint32_t>(data.n_bands()));
    put_u32(out, static_cast<uint32_t>(data.n_pixels()));
    put_u32(out, static_cast<uint32_t>(data.n_truth));
    // Column-major storage is already pixel-major on disk.
    out.write(reinterpret_cast<const char*>(data.pixels.data()),
              static_cast<std::streamsize>(sizeof(double) * data.pixels.size()));
    if (!out) throw Error("write failed for " + path.string());
}

SpectralDataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());

    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) {
        const uint32_t m = get_u32(in);
        const uint32_t l = get_u32(in);
        const uint32_t n_truth = get_u32(in);
        if (!in || m == 0 || l == 0)
            throw ShapeMismatch("corrupt dataset header in " + path.string());
        SpectralDataset data;
        data.n_truth = static_cast<int>(n_truth);
        data.pixels.resize(m, l);
        in.read(reinterpret_cast<char*>(data.pixels.data()),
                static_cast<std::streamsize>(sizeof(double) * data.pixels.size()));
        if (in.gcount() != static_cast<std::streamsize>(sizeof(double) * data.pixels.size()))
            throw ShapeMismatch("truncated dataset payload in " + path.string());
        return data;
    }

    in.clear();
    in.seekg(0);
    SpectralDataset data;
    data.pixels = parse_csv(in, path.string()).transpose();
    return data;
}

void write_csv(const std::filesystem::path& path, const MatrixXd& m) {
    std::FILE* out = std::fopen(path.string().c_str(), "wb");
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            std::fprintf(out, c == 0 ? "%.17g" : ",%.17g", m(r, c));
        std::fputc('\n', out);
    }
    if (std::fclose(out) != 0) throw Error("write failed for " + path.string());
}

MatrixXd read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_csv(in, path.string());
}

void write_dataset_csv(const std::filesystem::path& path, const SpectralDataset& data) {
    write_csv(path, data.pixels.transpose());
}

}  // namespace hypercsi::io
