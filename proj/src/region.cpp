#include "specunc/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "specunc/errors.hpp"

namespace specunc {

Complex Curve::at(double t) const { return center + std::polar(radius, t); }

void RegionK::push(RegionSample s) {
  require_inside_disc(s.z, "region sample");
  samples_.push_back(s);
  max_modulus_ = std::max(max_modulus_, std::abs(s.z));
}

void RegionK::note_modulus(double r) {
  if (r > 1.0 - kBoundaryMargin) {
    throw InputError("region: shape reaches beyond |z| = 1 - 1e-6");
  }
  max_modulus_ = std::max(max_modulus_, r);
}

RegionK& RegionK::add_circle(Complex center, double radius, int samples) {
  if (radius <= 0.0 || samples < 1) throw InputError("region: circle needs radius > 0 and samples >= 1");
  note_modulus(std::abs(center) + radius);
  const int idx = static_cast<int>(curves_.size());
  curves_.push_back({center, radius, 0.0, 2.0 * kPi, true});
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * kPi * i / samples;
    push({curves_[idx].at(t), idx, t});
  }
  return *this;
}

RegionK& RegionK::add_circle_at(Complex center, double radius, std::span<const double> angles) {
  if (radius <= 0.0 || angles.empty()) throw InputError("region: circle needs radius > 0 and samples");
  note_modulus(std::abs(center) + radius);
  const int idx = static_cast<int>(curves_.size());
  curves_.push_back({center, radius, 0.0, 2.0 * kPi, true});
  for (double t : angles) push({curves_[idx].at(t), idx, t});
  return *this;
}

RegionK& RegionK::add_arc(Complex center, double radius, double from, double to, int samples) {
  if (radius <= 0.0 || samples < 2 || !(to > from)) {
    throw InputError("region: arc needs radius > 0, from < to and samples >= 2");
  }
  const int idx = static_cast<int>(curves_.size());
  curves_.push_back({center, radius, from, to, false});
  for (int i = 0; i < samples; ++i) {
    const double t = from + (to - from) * i / (samples - 1);
    push({curves_[idx].at(t), idx, t});
  }
  // The farthest point of the full circle lies at arg(center); include it
  // when the arc covers that angle.
  double far = std::abs(center) > 0.0 ? std::arg(center) : from;
  while (far < from) far += 2.0 * kPi;
  while (far > to && far - 2.0 * kPi >= from) far -= 2.0 * kPi;
  if (far >= from && far <= to) note_modulus(std::abs(curves_[idx].at(far)));
  return *this;
}

RegionK& RegionK::add_disc(Complex center, double radius, int rings, int samples) {
  if (radius <= 0.0 || rings < 1 || samples < 1) {
    throw InputError("region: disc needs radius > 0, rings >= 1 and samples >= 1");
  }
  note_modulus(std::abs(center) + radius);
  push({center, -1, 0.0});
  for (int i = 1; i <= rings; ++i) {
    const double r = radius * i / rings;
    const int count = std::max(8, samples * i / rings);
    const int idx = static_cast<int>(curves_.size());
    curves_.push_back({center, r, 0.0, 2.0 * kPi, true});
    for (int s = 0; s < count; ++s) {
      const double t = 2.0 * kPi * s / count;
      push({curves_[idx].at(t), idx, t});
    }
  }
  return *this;
}

RegionK& RegionK::add_point(Complex z) {
  push({z, -1, 0.0});
  return *this;
}

namespace {

double parse_number(const std::string& s, const std::string& token) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("region: cannot parse number '" + s + "' in '" + token + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// "x", "x,y" or the polar form "rho<phi".
Complex parse_pair(const std::string& s, const std::string& token) {
  if (const auto lt = s.find('<'); lt != std::string::npos) {
    return std::polar(parse_number(s.substr(0, lt), token), parse_number(s.substr(lt + 1), token));
  }
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {parse_number(parts[0], token), 0.0};
  if (parts.size() == 2) return {parse_number(parts[0], token), parse_number(parts[1], token)};
  throw InputError("region: expected 'x' or 'x,y' in '" + token + "'");
}

}  // namespace

RegionK RegionK::parse(std::string_view text, int samples) {
  // Commas both join shapes and separate coordinates; a new shape starts at
  // a comma followed by a letter.
  std::vector<std::string> tokens;
  std::string cur;
  const std::string src(text);
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char ch = src[i];
    if (ch == ',' && i + 1 < src.size() && std::isalpha(static_cast<unsigned char>(src[i + 1]))) {
      tokens.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);

  RegionK k;
  for (const auto& token : tokens) {
    std::string body = token;
    Complex center(0.0);
    if (const auto at = body.find('@'); at != std::string::npos) {
      center = parse_pair(body.substr(at + 1), token);
      body = body.substr(0, at);
    }
    const auto fields = split(body, ':');
    const std::string& kind = fields[0];
    if (kind == "circle" && fields.size() == 2) {
      k.add_circle(center, parse_number(fields[1], token), samples);
    } else if (kind == "disc" && (fields.size() == 2 || fields.size() == 3)) {
      int rings = 16;
      if (fields.size() == 3) {
        if (fields[2].rfind("grid=", 0) != 0) throw InputError("region: expected grid=M in '" + token + "'");
        rings = static_cast<int>(parse_number(fields[2].substr(5), token));
      }
      k.add_disc(center, parse_number(fields[1], token), rings, samples);
    } else if (kind == "arc" && fields.size() == 4) {
      k.add_arc(center, parse_number(fields[1], token), parse_number(fields[2], token),
                parse_number(fields[3], token), samples);
    } else if (kind == "point" && fields.size() == 2) {
      k.add_point(center + parse_pair(fields[1], token));
    } else {
      throw InputError("region: unrecognized shape '" + token + "'");
    }
  }
  if (k.empty()) throw InputError("region: empty region");
  return k;
}

}  // namespace specunc
