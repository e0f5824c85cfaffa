#include "mhdlab/app/output.hpp"

#include <cstdio>
#include <fstream>

#include "mhdlab/errors.hpp"

namespace mhdlab::app {

namespace {

std::ofstream open(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io_failure, "cannot write " + path.string());
    return out;
}

void close(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) fail(ErrorKind::io_failure, "write failed for " + path.string());
}

}  // namespace

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_snapshots_csv(const std::filesystem::path& path, std::span<const SpectralState> traj,
                         const std::string& hash)
{
    std::ofstream out = open(path);
    out << "# config_hash=" << hash << "\n";
    out << "t,y,re_psi,im_psi,re_phi,im_phi\n";
    for (const SpectralState& s : traj) {
        const PeriodicGrid& g = s.grid();
        for (std::size_t j = 0; j < g.size(); ++j)
            out << fmt(s.t) << ',' << fmt(g.node(j)) << ',' << fmt(s.psi_hat[j].real()) << ','
                << fmt(s.psi_hat[j].imag()) << ',' << fmt(s.phi_hat[j].real()) << ',' << fmt(s.phi_hat[j].imag())
                << '\n';
    }
    close(out, path);
}

void write_series_csv(const std::filesystem::path& path, std::span<const NormSeries> series, const std::string& hash)
{
    std::ofstream out = open(path);
    out << "# config_hash=" << hash << "\n";
    out << "t,value,label\n";
    for (const NormSeries& s : series)
        for (std::size_t i = 0; i < s.size(); ++i) out << fmt(s.times[i]) << ',' << fmt(s.values[i]) << ',' << s.label << '\n';
    close(out, path);
}

void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out = open(path);
    out << j.dump(2) << '\n';
    close(out, path);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out = open(path);
    out << text;
    close(out, path);
}

}  // namespace mhdlab::app
