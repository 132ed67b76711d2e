#ifndef RETROAI_ANALYTICS_HPP
#define RETROAI_ANALYTICS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retroai/constraints.hpp"
#include "retroai/domain.hpp"

namespace retroai {

// ---------------------------------------------------------------------------
// Burndown

struct BurndownSeries {
  SprintId sprint_id;
  std::int64_t committed = 0;
  std::vector<Date> day_labels;         // sprint start .. end, inclusive
  std::vector<std::int64_t> remaining;  // at the end of each day
  std::vector<Rational> ideal;          // committed -> 0, linear

  friend bool operator==(const BurndownSeries&, const BurndownSeries&) = default;
};

inline BurndownSeries burndown_series(const Project& p, const SprintId& sprint_id) {
  const Sprint& s = get_sprint(p, sprint_id);
  if (auto issue = check_sprint_date(s)) throw ConstraintViolation({*issue});
  BurndownSeries out;
  out.sprint_id = sprint_id;
  out.committed = expected_velocity(p, sprint_id);
  const auto items = sprint_items(p, sprint_id);
  const int last = days_between(s.start_date, s.end_date);
  for (int d = 0; d <= last; ++d) {
    Date day = add_days(s.start_date, d);
    Instant cutoff = end_of_day(day, p.utc_offset_minutes);
    std::int64_t done = 0;
    for (const auto* item : items) {
      if (status_at(p, *item, cutoff) == Status::Done) done += item->story_points;
    }
    out.day_labels.push_back(day);
    out.remaining.push_back(out.committed - done);
    out.ideal.push_back(Rational{out.committed * (last - d), last});
  }
  return out;
}

// "day,remaining,ideal" with one row per day.
inline std::string to_csv(const BurndownSeries& b) {
  std::string out = "day,remaining,ideal\n";
  for (std::size_t i = 0; i < b.day_labels.size(); ++i) {
    out += format_date(b.day_labels[i]) + "," + std::to_string(b.remaining[i]) + "," +
           format_points(b.ideal[i]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traffic-light status

enum class StatusState { OnTrack, Attention, AtRisk, Unknown };

inline std::string_view to_string(StatusState s) {
  switch (s) {
    case StatusState::OnTrack: return "OnTrack";
    case StatusState::Attention: return "Attention";
    case StatusState::AtRisk: return "AtRisk";
    case StatusState::Unknown: return "Unknown";
  }
  return "?";
}

inline std::string_view glyph_for(StatusState s) {
  switch (s) {
    case StatusState::OnTrack: return "✓";
    case StatusState::Attention: return "?";
    case StatusState::AtRisk: return "!";
    case StatusState::Unknown: return "–";
  }
  return "–";
}

struct StatusLight {
  StatusState state = StatusState::Unknown;
  std::string glyph{glyph_for(StatusState::Unknown)};
  std::optional<Rational> ratio;  // mean actual / ideal velocity
};

struct StatusThresholds {
  Rational on_track{9, 10};   // ratio >= on_track
  Rational attention{7, 10};  // attention <= ratio < on_track
};

inline StatusState classify_ratio(const Rational& r, const StatusThresholds& t = {}) {
  if (r >= t.on_track) return StatusState::OnTrack;
  if (r >= t.attention) return StatusState::Attention;
  return StatusState::AtRisk;
}

// Mean actual/ideal velocity ratio over sprints that ended before `as_of`.
inline StatusLight project_status(const Project& p, Instant as_of, const StatusThresholds& t = {}) {
  StatusLight light;
  const Rational ideal = ideal_velocity(p);
  if (ideal == Rational{0}) return light;
  Rational sum{0};
  int completed = 0;
  for (const auto& s : p.sprints) {
    Instant end = end_of_day(s.end_date, p.utc_offset_minutes);
    if (end > as_of) continue;
    sum = sum + Rational{actual_velocity(p, s.id, end)} / ideal;
    ++completed;
  }
  if (completed == 0) return light;
  light.ratio = sum / Rational{completed};
  light.state = classify_ratio(*light.ratio, t);
  light.glyph = glyph_for(light.state);
  return light;
}

// ---------------------------------------------------------------------------
// Colour-vision palettes

enum class VisionCategory {
  Trichromacy,
  Achromatopsia,
  Deuteranomaly,
  Deuteranopia,
  Protanomaly,
  Protanopia,
  Achromatomaly,
  Tritanomaly,
  Tritanopia,
};

struct Palette {
  VisionCategory category;
  std::string_view key;    // stable identifier, e.g. "deuteranopia"
  std::string_view label;  // e.g. "Green-Blind / Deuteranopia"
  std::string_view on_track;
  std::string_view attention;
  std::string_view at_risk;
};

// Triples are separated by hue along the axis each deficiency keeps and,
// for the monochromatic categories, by luminance alone.
inline constexpr std::array<Palette, 9> kPalettes{{
    {VisionCategory::Trichromacy, "trichromacy", "Trichromacy / Normal", "#2E7D32", "#F9A825",
     "#C62828"},
    {VisionCategory::Achromatopsia, "achromatopsia", "Monochromacy / Achromatopsia", "#F5F5F5",
     "#9E9E9E", "#424242"},
    {VisionCategory::Deuteranomaly, "deuteranomaly", "Green-Weak / Deuteranomaly", "#0072B2",
     "#E69F00", "#D55E00"},
    {VisionCategory::Deuteranopia, "deuteranopia", "Green-Blind / Deuteranopia", "#56B4E9",
     "#F0E442", "#A6473D"},
    {VisionCategory::Protanomaly, "protanomaly", "Red-Weak / Protanomaly", "#0072B2", "#F0E442",
     "#7A5C00"},
    {VisionCategory::Protanopia, "protanopia", "Red-Blind / Protanopia", "#56B4E9", "#E6D200",
     "#5C4B00"},
    {VisionCategory::Achromatomaly, "achromatomaly", "Blue Cone Monochromacy / Achromatomaly",
     "#E8E8E8", "#A8A8A8", "#505050"},
    {VisionCategory::Tritanomaly, "tritanomaly", "Blue-Weak / Tritanomaly", "#009E73", "#CC79A7",
     "#D50000"},
    {VisionCategory::Tritanopia, "tritanopia", "Blue-Blind / Tritanopia", "#00A6A6", "#FF8FA3",
     "#B00020"},
}};

inline const Palette& palette_for(VisionCategory c) {
  for (const auto& p : kPalettes) {
    if (p.category == c) return p;
  }
  throw InvalidArgumentError("unknown colour-vision category");
}

namespace detail {
inline std::string fold_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}
}  // namespace detail

// Accepts the key ("deuteranopia"), the full label, or either half of the
// label ("Green-Blind"), ignoring case, spaces and punctuation.
inline const Palette& palette_for(std::string_view name) {
  const std::string wanted = detail::fold_name(name);
  for (const auto& p : kPalettes) {
    std::string_view label = p.label;
    auto slash = label.find('/');
    if (wanted == detail::fold_name(p.key) || wanted == detail::fold_name(label) ||
        wanted == detail::fold_name(label.substr(0, slash)) ||
        wanted == detail::fold_name(label.substr(slash + 1))) {
      return p;
    }
  }
  throw InvalidArgumentError("unknown colour-vision category '" + std::string(name) + "'");
}

}  // namespace retroai

#endif  // RETROAI_ANALYTICS_HPP
