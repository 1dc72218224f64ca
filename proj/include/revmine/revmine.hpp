#pragma once

#include "revmine/agreement.hpp"
#include "revmine/align.hpp"
#include "revmine/classify.hpp"
#include "revmine/corpus.hpp"
#include "revmine/document.hpp"
#include "revmine/errors.hpp"
#include "revmine/latex.hpp"
#include "revmine/lexical.hpp"
#include "revmine/metadata.hpp"
#include "revmine/pairs_io.hpp"
#include "revmine/pipeline.hpp"
#include "revmine/stats.hpp"
#include "revmine/text.hpp"
