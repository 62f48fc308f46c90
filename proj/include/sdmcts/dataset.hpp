#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "error.hpp"
#include "object_set.hpp"

namespace sdmcts {

enum class AttributeKind { nominal, numerical };

using ValueCode = std::uint32_t;

inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_decimal(const std::string& token, const std::string& column, std::size_t row) {
    auto b = token.find_first_not_of(" \t");
    auto e = token.find_last_not_of(" \t");
    double v = 0;
    if (b != std::string::npos) {
        const char* first = token.data() + b;
        const char* last = token.data() + e + 1;
        if (*first == '+') ++first;
        auto res = std::from_chars(first, last, v, std::chars_format::general);
        if (res.ec == std::errc{} && res.ptr == last) return v;
    }
    throw LoadError(LoadErrorKind::non_numeric,
                    "'" + token + "' in column '" + column + "' at data row " + std::to_string(row + 1));
}

struct AttributeMeta {
    std::string name;
    AttributeKind kind = AttributeKind::nominal;
    // Exactly one of these is populated, matching `kind`. Numerical values
    // are strictly ascending.
    std::vector<std::string> nominal_values;
    std::vector<double> numeric_values;

    std::size_t domain_size() const noexcept {
        return kind == AttributeKind::nominal ? nominal_values.size() : numeric_values.size();
    }
    bool is_numerical() const noexcept { return kind == AttributeKind::numerical; }

    std::string value_text(ValueCode code) const {
        return kind == AttributeKind::nominal ? nominal_values.at(code) : format_number(numeric_values.at(code));
    }

    std::optional<ValueCode> find_nominal(const std::string& v) const {
        auto it = std::find(nominal_values.begin(), nominal_values.end(), v);
        if (it == nominal_values.end()) return std::nullopt;
        return static_cast<ValueCode>(it - nominal_values.begin());
    }
    std::optional<ValueCode> find_numeric(double v) const {
        auto it = std::lower_bound(numeric_values.begin(), numeric_values.end(), v);
        if (it == numeric_values.end() || *it != v) return std::nullopt;
        return static_cast<ValueCode>(it - numeric_values.begin());
    }
};

/// Raw column used to assemble a Dataset; domains are derived from the data.
struct RawColumn {
    std::string name;
    AttributeKind kind = AttributeKind::nominal;
    std::vector<std::string> text;  // nominal
    std::vector<double> numbers;    // numerical

    std::size_t size() const noexcept { return kind == AttributeKind::nominal ? text.size() : numbers.size(); }
};

/// Immutable table of objects x attributes with one class label per object.
/// Values are stored column-wise as codes into each attribute's domain.
class Dataset {
  public:
    Dataset(std::string name, std::vector<AttributeMeta> attributes, std::vector<std::vector<ValueCode>> columns,
            std::vector<ValueCode> labels, std::vector<std::string> label_names)
        : name_(std::move(name)),
          attributes_(std::move(attributes)),
          columns_(std::move(columns)),
          labels_(std::move(labels)),
          label_names_(std::move(label_names)) {
        validate();
        index();
    }

    /// Builds a dataset from raw columns. Nominal domains and the label set
    /// are sorted lexicographically; numerical domains ascending.
    static Dataset from_columns(std::string name, std::vector<RawColumn> columns, const std::vector<std::string>& labels) {
        if (labels.empty()) throw LoadError(LoadErrorKind::empty_dataset, "dataset has no objects");
        if (columns.empty()) throw LoadError(LoadErrorKind::missing_column, "dataset has no attributes");
        const std::size_t n = labels.size();
        std::vector<AttributeMeta> metas;
        std::vector<std::vector<ValueCode>> codes;
        for (auto& col : columns) {
            if (col.size() != n) throw LoadError(LoadErrorKind::malformed_row, "column '" + col.name + "' has wrong length");
            AttributeMeta meta{col.name, col.kind, {}, {}};
            std::vector<ValueCode> c(n);
            if (col.kind == AttributeKind::nominal) {
                meta.nominal_values = col.text;
                std::sort(meta.nominal_values.begin(), meta.nominal_values.end());
                meta.nominal_values.erase(std::unique(meta.nominal_values.begin(), meta.nominal_values.end()),
                                          meta.nominal_values.end());
                std::map<std::string_view, ValueCode> lookup;
                for (std::size_t i = 0; i < meta.nominal_values.size(); ++i)
                    lookup.emplace(meta.nominal_values[i], static_cast<ValueCode>(i));
                for (std::size_t o = 0; o < n; ++o) c[o] = lookup.at(col.text[o]);
            } else {
                meta.numeric_values = col.numbers;
                std::sort(meta.numeric_values.begin(), meta.numeric_values.end());
                meta.numeric_values.erase(std::unique(meta.numeric_values.begin(), meta.numeric_values.end()),
                                          meta.numeric_values.end());
                for (std::size_t o = 0; o < n; ++o) c[o] = *meta.find_numeric(col.numbers[o]);
            }
            metas.push_back(std::move(meta));
            codes.push_back(std::move(c));
        }
        std::vector<std::string> label_names = labels;
        std::sort(label_names.begin(), label_names.end());
        label_names.erase(std::unique(label_names.begin(), label_names.end()), label_names.end());
        std::vector<ValueCode> label_codes(n);
        for (std::size_t o = 0; o < n; ++o)
            label_codes[o] = static_cast<ValueCode>(
                std::lower_bound(label_names.begin(), label_names.end(), labels[o]) - label_names.begin());
        return Dataset(std::move(name), std::move(metas), std::move(codes), std::move(label_codes),
                       std::move(label_names));
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t object_count() const noexcept { return labels_.size(); }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }
    std::size_t label_count() const noexcept { return label_names_.size(); }

    const AttributeMeta& attribute(std::size_t a) const { return attributes_.at(a); }
    std::span<const AttributeMeta> attributes() const noexcept { return attributes_; }
    std::span<const ValueCode> column(std::size_t a) const { return columns_.at(a); }
    ValueCode code(std::size_t object, std::size_t a) const { return columns_[a][object]; }

    ValueCode label(std::size_t object) const { return labels_[object]; }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }
    const std::string& label_name(ValueCode l) const { return label_names_.at(l); }

    std::optional<ValueCode> label_index(const std::string& name) const {
        auto it = std::find(label_names_.begin(), label_names_.end(), name);
        if (it == label_names_.end()) return std::nullopt;
        return static_cast<ValueCode>(it - label_names_.begin());
    }
    std::optional<std::size_t> attribute_index(const std::string& name) const {
        for (std::size_t a = 0; a < attributes_.size(); ++a)
            if (attributes_[a].name == name) return a;
        return std::nullopt;
    }

    const ObjectSet& all_objects() const noexcept { return all_; }
    /// Objects whose value on attribute `a` has code `code`.
    const ObjectSet& value_set(std::size_t a, ValueCode code) const { return value_sets_[a][code]; }
    /// Objects carrying class label `l`.
    const ObjectSet& label_set(ValueCode l) const { return label_sets_.at(l); }

  private:
    void validate() const {
        if (labels_.empty()) throw LoadError(LoadErrorKind::empty_dataset, "dataset has no objects");
        if (attributes_.empty()) throw LoadError(LoadErrorKind::missing_column, "dataset has no attributes");
        if (columns_.size() != attributes_.size())
            throw LoadError(LoadErrorKind::malformed_row, "column count does not match attribute count");
        if (label_names_.empty()) throw LoadError(LoadErrorKind::empty_dataset, "empty label set");
        for (std::size_t a = 0; a < attributes_.size(); ++a) {
            const auto& m = attributes_[a];
            if (m.domain_size() == 0) throw LoadError(LoadErrorKind::bad_schema, "empty domain for '" + m.name + "'");
            if (m.kind == AttributeKind::numerical &&
                std::adjacent_find(m.numeric_values.begin(), m.numeric_values.end(),
                                   [](double x, double y) { return !(x < y); }) != m.numeric_values.end())
                throw LoadError(LoadErrorKind::bad_schema, "numerical domain of '" + m.name + "' not strictly ascending");
            if (m.kind == AttributeKind::nominal) {
                auto sorted = m.nominal_values;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                    throw LoadError(LoadErrorKind::bad_schema, "duplicate nominal value in '" + m.name + "'");
            }
            if (columns_[a].size() != labels_.size())
                throw LoadError(LoadErrorKind::malformed_row, "column '" + m.name + "' has wrong length");
            for (auto c : columns_[a])
                if (c >= m.domain_size()) throw LoadError(LoadErrorKind::bad_schema, "value code out of domain");
        }
        for (auto l : labels_)
            if (l >= label_names_.size()) throw LoadError(LoadErrorKind::bad_schema, "label code out of range");
    }

    void index() {
        const std::size_t n = labels_.size();
        all_ = ObjectSet(n, true);
        value_sets_.resize(attributes_.size());
        for (std::size_t a = 0; a < attributes_.size(); ++a) {
            value_sets_[a].assign(attributes_[a].domain_size(), ObjectSet(n));
            for (std::size_t o = 0; o < n; ++o) value_sets_[a][columns_[a][o]].insert(o);
            for (std::size_t v = 0; v < value_sets_[a].size(); ++v)
                if (value_sets_[a][v].empty())
                    throw LoadError(LoadErrorKind::bad_schema,
                                    "domain value of '" + attributes_[a].name + "' not observed in data");
        }
        label_sets_.assign(label_names_.size(), ObjectSet(n));
        for (std::size_t o = 0; o < n; ++o) label_sets_[labels_[o]].insert(o);
    }

    std::string name_;
    std::vector<AttributeMeta> attributes_;
    std::vector<std::vector<ValueCode>> columns_;
    std::vector<ValueCode> labels_;
    std::vector<std::string> label_names_;

    ObjectSet all_;
    std::vector<std::vector<ObjectSet>> value_sets_;
    std::vector<ObjectSet> label_sets_;
};

}  // namespace sdmcts
