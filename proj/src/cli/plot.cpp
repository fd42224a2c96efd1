#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ctk/cli.hpp"

namespace ctk::cli {

namespace {

std::string base_name(const std::string& path) {
  const auto k = path.find_last_of('/');
  return k == std::string::npos ? path : path.substr(k + 1);
}

void write_or_throw(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << body;
}

}  // namespace

std::vector<std::string> emit_plot_data(PlotKind kind, const std::vector<std::vector<double>>& rows,
                                        const std::string& prefix, const json& manifest) {
  const std::string dat = prefix + ".dat", gp = prefix + ".gp";
  const std::string datname = base_name(dat);
  std::ostringstream d, s;
  d << "# manifest " << manifest.dump() << '\n';
  switch (kind) {
    case PlotKind::PhaseDiagram: d << "# alpha_minus_d delta beta m_abs\n"; break;
    case PlotKind::FbrScaling: d << "# log_R log_F\n"; break;
    case PlotKind::NuVsBeta: d << "# beta nu\n"; break;
  }
  d << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) d << (i ? " " : "") << r[i];
    d << '\n';
  }

  s << "# gnuplot script for " << datname << "\n";
  s << "set terminal pngcairo size 800,600\n";
  s << "set output '" << base_name(prefix) << ".png'\n";
  s << "n = " << rows.size() << "\n";
  switch (kind) {
    case PlotKind::PhaseDiagram: {
      double bmax = 0;
      for (const auto& r : rows) bmax = std::max(bmax, r.at(2));
      s << std::setprecision(17);
      s << "bmax = " << bmax << "\n";
      s << "set xlabel 'alpha - d'\nset ylabel 'delta'\n";
      s << "set xrange [0:2]\nset yrange [0:2]\n";
      s << "set cblabel '|m|'\nset palette rgb 33,13,10\n";
      s << "boundary(x) = x < 1 ? x : 1\n";
      s << "set label 'Phase transition' at 1.2,1.6\n";
      s << "set label 'Uniqueness?' at 1.2,0.3\n";
      s << "plot boundary(x) with lines lw 2 lc rgb 'black' title 'delta = min(alpha-d, 1)', \\\n";
      s << "     '" << datname << "' using 1:($3 == bmax ? $2 : 1/0):4 with points pt 5 ps 2 palette title 'beta = max'\n";
      break;
    }
    case PlotKind::FbrScaling:
      s << "set xlabel 'log R'\nset ylabel 'log F'\n";
      s << "f(x) = k*x + c\nk = 1\nc = 0\n";
      s << "if (n >= 2) { fit f(x) '" << datname << "' using 1:2 via k, c }\n";
      s << "if (n > 0) { plot '" << datname << "' using 1:2 with points pt 7 title 'F', f(x) with lines title sprintf('slope %.3f', k) } \\\n";
      s << "else { set xrange [0:1]; set yrange [0:1]; plot 0 lc rgb 'white' notitle }\n";
      break;
    case PlotKind::NuVsBeta:
      s << "set xlabel 'beta'\nset ylabel 'probability of a plus origin'\n";
      s << "if (n > 0) { set logscale y; plot '" << datname << "' using 1:2 with linespoints pt 7 title 'exact' } \\\n";
      s << "else { set xrange [0:1]; set yrange [0:1]; plot 0 lc rgb 'white' notitle }\n";
      break;
  }
  write_or_throw(dat, d.str());
  write_or_throw(gp, s.str());
  return {dat, gp};
}

}  // namespace ctk::cli
