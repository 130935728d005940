#include "ddc/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ddc {

namespace fs = std::filesystem;

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_field_csv(const fs::path& path, const ScalarField& f, double t) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw IoError("cannot open for writing: " + path.string());
    const Grid& g = f.grid;
    std::fprintf(fp, "# %d,%d,%.17g,%.17g,%.17g\n", g.nx, g.ny, g.Lx, g.Ly, t);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) std::fputc(',', fp);
            std::fprintf(fp, "%.17g", f(i, j));
        }
        std::fputc('\n', fp);
    }
    if (std::fclose(fp) != 0) throw IoError("write failed: " + path.string());
}

ScalarField read_field_csv(const fs::path& path, double* t_out) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string header;
    std::getline(in, header);
    int nx = 0, ny = 0;
    double Lx = 0, Ly = 0, t = 0;
    if (std::sscanf(header.c_str(), "# %d,%d,%lf,%lf,%lf", &nx, &ny, &Lx, &Ly, &t) != 5)
        throw IoError("bad snapshot header in " + path.string());
    ScalarField f(build_grid(nx, ny, Lx, Ly));
    std::string line;
    for (int j = 0; j < ny; ++j) {
        if (!std::getline(in, line)) throw IoError("truncated snapshot: " + path.string());
        const char* s = line.c_str();
        char* end = nullptr;
        for (int i = 0; i < nx; ++i) {
            f(i, j) = std::strtod(s, &end);
            if (end == s) throw IoError("bad snapshot row in " + path.string());
            s = (*end == ',') ? end + 1 : end;
        }
    }
    if (t_out) *t_out = t;
    return f;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw IoError("cannot open for writing: " + path.string());
    std::fprintf(fp, "t,sup_v,mass_u,mass_v,consumed,harnack_ratio,sup_u,lp_p64\n");
    for (const Sample& s : traj.samples)
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                     s.sup_v, s.mass_u, s.mass_v, s.consumed, s.harnack_ratio, s.sup_u,
                     s.lp_p64);
    if (std::fclose(fp) != 0) throw IoError("write failed: " + path.string());
}

void read_trajectory_csv(const fs::path& path, Trajectory& traj) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);  // header
    traj.samples.clear();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Sample s;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s.t, &s.sup_v,
                        &s.mass_u, &s.mass_v, &s.consumed, &s.harnack_ratio, &s.sup_u,
                        &s.lp_p64) != 8)
            throw IoError("bad trajectory row in " + path.string());
        traj.samples.push_back(s);
    }
    if (!traj.samples.empty()) traj.sup_v0 = traj.samples.front().sup_v;
}

void write_budget_csv(const fs::path& path, const Trajectory& traj) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw IoError("cannot open for writing: " + path.string());
    std::fprintf(fp, "t,grad6_budget\n");
    for (size_t i = 0; i < traj.samples.size(); ++i)
        std::fprintf(fp, "%.17g,%.17g\n", traj.samples[i].t, traj.grad6[i]);
    if (std::fclose(fp) != 0) throw IoError("write failed: " + path.string());
}

void read_budget_csv(const fs::path& path, Trajectory& traj) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);
    traj.grad6.clear();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t = 0, g = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &g) != 2)
            throw IoError("bad budget row in " + path.string());
        traj.grad6.push_back(g);
    }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    nlohmann::json j;
    in >> j;
    return j;
}

std::uint64_t fnv1a64(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_string(const std::string& s) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(s.data(), s.size()));
    return buf;
}

std::string hash_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return hash_string(ss.str());
}

}  // namespace ddc
