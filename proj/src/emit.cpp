#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "cvswap/errors.hpp"
#include "cvswap/experiment.hpp"

namespace cvswap {

namespace fs = std::filesystem;

namespace {

std::string csv_text(const RunTable& t) {
  std::ostringstream out;
  for (const auto& c : t.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string metadata_text(const RunRecord& r) {
  std::ostringstream out;
  out << "# cvswap run metadata. The [config] section is a complete config file.\n";
  out << "[config]\n" << snapshot(r.config);
  out << "[record]\n";
  out << "version = " << r.version << '\n';
  out << "status = " << (r.exit_code == kExitOk ? "ok" : r.failure) << '\n';
  out << "exit_code = " << r.exit_code << '\n';
  out << "wall_time_s = " << format_number(r.wall_seconds) << '\n';
  for (std::size_t n = 0; n < r.derived.size(); ++n) {
    const auto& name = r.derived[n].first;
    const DerivedParams& d = r.derived[n].second;
    const SteadyState& s = r.steady[n].second;
    const StabilityReport& st = r.stability[n].second;
    const auto line = [&](const std::string& key, double value) {
      out << name << '.' << key << " = " << format_number(value) << '\n';
    };
    line("kappa_rad_s", d.kappa);
    line("omega_c_rad_s", d.omega_c);
    line("drive_rad_s", d.drive);
    line("g_rad_s", d.g);
    line("G_rad_s", d.G);
    if (d.bec_mass) line("bec_mass_kg", *d.bec_mass);
    line("Omega_c_over_wm", d.Omega_c / d.omega_m);
    line("omega_B_over_wm", d.omega_B / d.omega_m);
    line("nbar_m", d.nbar_m);
    line("n_c", d.n_c);
    line("gamma_m_rad_s", d.gamma_m);
    line("gamma_c_rad_s", d.gamma_c);
    line("alpha", s.alpha);
    line("Delta_over_wm", s.Delta / d.omega_m);
    line("steady_multiplicity", s.multiplicity);
    line("steady_residual", s.residual);
    out << name << ".stable = " << (st.stable ? "true" : "false") << '\n';
    line("max_real_part_rad_s", st.max_real_part);
  }
  out << "audit.cms_checked = " << r.audit.checked << '\n';
  out << "audit.unphysical = " << r.audit.unphysical << '\n';
  out << "audit.nonconverged = " << r.audit.nonconverged << '\n';
  out << "audit.max_rel_quadrature_error = " << format_number(r.audit.max_rel_error) << '\n';
  if (r.audit.checked > 0) {
    out << "audit.min_symplectic_eigenvalue = " << format_number(r.audit.min_symplectic) << '\n';
  }
  out << "flagged_points = " << r.flagged_points << '\n';
  for (const auto& [key, value] : r.summary) out << "summary." << key << " = " << value << '\n';
  for (const auto& t : r.tables) out << "file = " << t.file << '\n';
  return out.str();
}

std::vector<fs::path> emit(const RunRecord& record, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");

  std::random_device entropy;
  const fs::path stage = dir / (".staging-" + std::to_string(entropy()));
  if (!fs::create_directory(stage, ec) || ec) {
    throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& t : record.tables) files.emplace_back(t.file, csv_text(t));
  files.emplace_back("run.meta", metadata_text(record));

  try {
    for (const auto& [name, text] : files) write_file(stage / name, text);
  } catch (...) {
    fs::remove_all(stage, ec);
    throw;
  }
  std::vector<fs::path> written;
  for (const auto& [name, text] : files) {
    fs::rename(stage / name, dir / name, ec);
    if (ec) {
      for (const auto& p : written) fs::remove(p, ec);
      fs::remove_all(stage, ec);
      throw IoError("cannot move '" + name + "' into '" + dir.string() + "'");
    }
    written.push_back(dir / name);
  }
  fs::remove_all(stage, ec);
  return written;
}

}  // namespace cvswap
