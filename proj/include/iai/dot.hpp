#pragma once

#include <string>

#include "iai/core.hpp"

namespace iai {

struct DotOptions {
    std::string name = "paradigm";
    /// Attach edge notes as tooltips.
    bool notes = true;
};

/// Graphviz rendering: left-to-right, one node per present entity with a
/// fixed per-entity style, edges labelled with their seq. An exogenous
/// artifact is drawn dashed with a double border.
std::string export_dot(const ParadigmGraph& g, const DotOptions& options = {});

}  // namespace iai
