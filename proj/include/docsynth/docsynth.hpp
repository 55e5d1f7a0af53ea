#pragma once

#include "annotations.hpp"
#include "batch.hpp"
#include "components.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "filler.hpp"
#include "fonts.hpp"
#include "formula.hpp"
#include "geometry.hpp"
#include "glyphs.hpp"
#include "image_pool.hpp"
#include "layout.hpp"
#include "random.hpp"
#include "raster.hpp"
#include "records.hpp"
#include "render.hpp"
#include "utf8.hpp"
#include "validate.hpp"
