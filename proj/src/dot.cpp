#include "iai/dot.hpp"

#include <sstream>

namespace iai {

namespace {

struct NodeStyle {
    std::string_view shape;
    std::string_view fill;
    std::string_view css;
};

NodeStyle style_for(Entity e) {
    switch (e) {
        case Entity::H: return {"ellipse", "#2171B5", "human"};
        case Entity::T: return {"box", "#E6550D", "prompt"};
        case Entity::I: return {"box", "#008080", "interaction"};
        case Entity::Aug: return {"box", "#762A83", "augmented"};
        case Entity::A: return {"note", "#008B8B", "artifact"};
        case Entity::G: return {"hexagon", "#CB181D", "genai"};
    }
    return {"box", "#000000", "unknown"};
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

}  // namespace

std::string export_dot(const ParadigmGraph& g, const DotOptions& options) {
    std::ostringstream os;
    os << "digraph \"" << escape(options.name) << "\" {\n";
    os << "  rankdir=LR;\n";
    os << "  node [fontname=\"Helvetica\", fontcolor=\"white\", style=\"filled\"];\n";
    os << "  edge [fontname=\"Helvetica\"];\n";

    const EntitySet present = g.entities();
    for (Entity e : kAllEntities) {
        if (!present.contains(e)) continue;
        const NodeStyle s = style_for(e);
        const bool exogenous = e == Entity::A && g.exogenous_artifact();
        os << "  " << to_string(e) << " [label=\"" << to_string(e) << "\", tooltip=\"" << long_name(e)
           << "\", shape=" << s.shape << ", fillcolor=\"" << s.fill << "\", class=\"entity-" << s.css
           << (exogenous ? " exogenous" : "") << "\"";
        if (exogenous) os << ", style=\"filled,dashed\", peripheries=2";
        os << "];\n";
    }

    for (const Edge& e : g.edges()) {
        os << "  " << to_string(e.source()) << " -> " << to_string(e.target()) << " [label=\"" << e.seq << "\"";
        if (options.notes && !e.note.empty()) os << ", tooltip=\"" << escape(e.note) << "\"";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace iai
