#include "nelsonlab/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nelsonlab {

namespace {

void format_double(std::ostream& out, double v) {
    if (!std::isfinite(v)) {
        out << "null";  // JSON has no inf/nan; reports never produce them on purpose
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

void emit(std::ostream& out, const Json& value, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (value.type()) {
        case nlohmann::detail::value_t::object: {
            if (value.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (auto it = value.begin(); it != value.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << pad_in << Json(it.key()).dump() << ": ";
                emit(out, it.value(), indent, depth + 1);
            }
            out << "\n" << pad << "}";
            return;
        }
        case nlohmann::detail::value_t::array: {
            if (value.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            bool first = true;
            for (const auto& item : value) {
                if (!first) out << ",\n";
                first = false;
                out << pad_in;
                emit(out, item, indent, depth + 1);
            }
            out << "\n" << pad << "]";
            return;
        }
        case nlohmann::detail::value_t::number_float:
            format_double(out, value.get<double>());
            return;
        default:
            out << value.dump();
            return;
    }
}

}  // namespace

void write_json(std::ostream& out, const Json& value, int indent) {
    emit(out, value, indent, 0);
    out << "\n";
}

std::string json_to_string(const Json& value, int indent) {
    std::ostringstream oss;
    write_json(oss, value, indent);
    return oss.str();
}

}  // namespace nelsonlab
