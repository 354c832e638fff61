#pragma once

#include "entgraph/activation.hpp"
#include "entgraph/bundle.hpp"
#include "entgraph/corpus.hpp"
#include "entgraph/entity_graph.hpp"
#include "entgraph/entity_tree.hpp"
#include "entgraph/error.hpp"
#include "entgraph/layout.hpp"
#include "entgraph/linking.hpp"
#include "entgraph/prediction.hpp"
#include "entgraph/random.hpp"
#include "entgraph/rewire.hpp"
#include "entgraph/synthetic.hpp"
#include "entgraph/wmd.hpp"
