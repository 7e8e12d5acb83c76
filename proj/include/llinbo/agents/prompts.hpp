#ifndef LLINBO_AGENTS_PROMPTS_HPP
#define LLINBO_AGENTS_PROMPTS_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <llinbo/agents/agent.hpp>
#include <llinbo/core/design.hpp>

namespace llinbo::agents {

inline constexpr std::string_view kBlackBoxSystemPrompt
    = "You are an AI assistant that helps people find the maximum of a black-box function.";

namespace detail {

inline std::string format(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

inline std::string join_nonempty(std::initializer_list<std::string> parts)
{
    std::string out;
    for (const auto& p : parts) {
        if (p.empty())
            continue;
        if (!out.empty())
            out += ' ';
        out += p;
    }
    return out;
}

inline std::string range_text(std::size_t dim) { return "[0, 1]^" + std::to_string(dim); }

} // namespace detail

/// "(0.2334, 0.1200)": coordinates with four decimals.
inline std::string format_coords(std::span<const double> x)
{
    std::string out = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i)
            out += ", ";
        out += detail::format("%.4f", x[i]);
    }
    return out + ")";
}

/// Outcomes carry four significant digits.
inline std::string format_outcome(double y) { return detail::format("%.4g", y); }

/// "x: (..), f(x): ..; x: (..), f(x): .." in the given order. Empty history renders "".
inline std::string render_data_card(const Dataset& history, std::span<const std::size_t> order)
{
    std::string out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& obs = history[order[k]];
        if (k)
            out += "; ";
        out += "x: " + format_coords(obs.design.coords()) + ", f(x): " + format_outcome(obs.outcome);
    }
    return out;
}

inline std::string render_data_card(const Dataset& history)
{
    std::vector<std::size_t> order(history.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    return render_data_card(history, order);
}

inline std::string render_warmstart_prompt(const ProblemContext& ctx, int count)
{
    const std::string D = std::to_string(ctx.dim);
    return "You are assisting me with maximizing a black-box function. The function is " + ctx.description
        + ". Suggest " + std::to_string(count) + " promising starting points in the range "
        + detail::range_text(ctx.dim) + ". Return the points strictly in JSON format as a list of " + D
        + "-dimensional vectors. Do not include any explanations, labels, formatting, or extra text. The response "
          "must be strictly valid JSON.";
}

/// Candidate generation (the light client's single-shot suggestion prompt).
inline std::string render_candidate_generation_prompt(const ProblemContext& ctx, const std::string& data_card)
{
    const std::string D = std::to_string(ctx.dim);
    return detail::join_nonempty({
        "The following are past evaluations of a black-box function, which is " + ctx.description + ".",
        data_card,
        "The allowable ranges for x is " + detail::range_text(ctx.dim)
            + ". Based on the past data, recommend the next point to evaluate that balances exploration and "
              "exploitation: - Exploration means selecting a point in an unexplored or less-sampled region that is "
              "far from the previously evaluated points. - Exploitation means selecting a point close to the "
              "previously high-performing evaluations. The goal is to eventually find the global maximum. Return "
              "only a single "
            + D
            + "-dimensional numerical vector with high precision. The response must be valid JSON with no "
              "explanations, labels, or extra formatting. Do not include any explanations, labels, formatting, or "
              "extra text.",
    });
}

inline std::string render_candidate_sampling_prompt(const ProblemContext& ctx, const std::string& data_card,
                                                    double target_score)
{
    const std::string D = std::to_string(ctx.dim);
    return detail::join_nonempty({
        "The following are past evaluations of a black-box function. The function is " + ctx.description + ".",
        data_card,
        "The allowable ranges for x is " + detail::range_text(ctx.dim)
            + ". Recommend a new x that can achieve the function value of " + format_outcome(target_score)
            + ". Return only a single " + D
            + "-dimensional numerical vector with the highest possible precision. Do not include any explanations, "
              "labels, formatting, or extra text. The response must be strictly valid JSON.",
    });
}

inline std::string render_surrogate_prompt(const ProblemContext& ctx, const std::string& data_card, const Design& x)
{
    return detail::join_nonempty({
        "The following are past evaluations of a black-box function, which is " + ctx.description + ".",
        data_card,
        "The allowable ranges for x is " + detail::range_text(ctx.dim) + ". Predict the function value at x = "
            + format_coords(x.coords())
            + ". Return only a single numerical value. Do not include any explanations, labels, formatting, or "
              "extra text. The response must be strictly a valid floating-point number.",
    });
}

// ---- reply parsing -------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Drops markdown code-fence lines.
inline std::string strip_fences(std::string_view s)
{
    std::string out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto nl = s.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = s.size();
        auto line = s.substr(pos, nl - pos);
        if (trim(line).substr(0, 3) != "```") {
            out.append(line);
            out += '\n';
        }
        pos = nl + 1;
    }
    return std::string(trim(out));
}

inline std::optional<nlohmann::json> parse_json_array(std::string_view reply)
{
    const std::string text = strip_fences(reply);
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (!j.is_discarded() && j.is_array())
        return j;
    const auto open = text.find('[');
    const auto close = text.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
        return std::nullopt;
    j = nlohmann::json::parse(text.substr(open, close - open + 1), nullptr, false);
    if (j.is_discarded() || !j.is_array())
        return std::nullopt;
    return j;
}

inline std::optional<std::vector<double>> as_vector(const nlohmann::json& j, std::size_t dim)
{
    if (!j.is_array() || j.size() != dim)
        return std::nullopt;
    std::vector<double> v;
    v.reserve(dim);
    for (const auto& e : j) {
        if (!e.is_number())
            return std::nullopt;
        const double d = e.get<double>();
        if (!std::isfinite(d))
            return std::nullopt;
        v.push_back(d);
    }
    return v;
}

} // namespace detail

/// A single D-vector, also accepted when wrapped in a one-element list.
inline std::optional<std::vector<double>> parse_vector_reply(std::string_view reply, std::size_t dim)
{
    auto j = detail::parse_json_array(reply);
    if (!j)
        return std::nullopt;
    if (auto v = detail::as_vector(*j, dim))
        return v;
    if (j->size() == 1)
        return detail::as_vector((*j)[0], dim);
    return std::nullopt;
}

/// A list of D-vectors.
inline std::optional<std::vector<std::vector<double>>> parse_vector_list_reply(std::string_view reply, std::size_t dim)
{
    auto j = detail::parse_json_array(reply);
    if (!j || j->empty())
        return std::nullopt;
    std::vector<std::vector<double>> out;
    for (const auto& e : *j) {
        auto v = detail::as_vector(e, dim);
        if (!v)
            return std::nullopt;
        out.push_back(std::move(*v));
    }
    return out;
}

inline std::optional<double> parse_number_reply(std::string_view reply)
{
    const std::string text = detail::strip_fences(reply);
    std::string_view s = detail::trim(text);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace llinbo::agents

#endif
