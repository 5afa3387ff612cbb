/*
 * Copyright 2026 The ergobound Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ergobound/model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <variant>

#include <json.hpp>

#include "ergobound/error.hpp"

namespace ergobound
{

namespace
{

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::parse, "model: " + msg); }

void allow_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys)
{
    if (!obj.is_object())
    {
        fail(std::string(where) + " must be an object");
    }
    for (const auto& [key, value] : obj.items())
    {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
        {
            fail("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

double number(const json& v, const std::string& what)
{
    if (!v.is_number())
    {
        fail(what + " must be a number");
    }
    return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& what)
{
    if (!v.is_number_unsigned())
    {
        fail(what + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<double> numbers(const json& v, const std::string& what)
{
    if (!v.is_array())
    {
        fail(what + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v)
    {
        out.push_back(number(e, what + " entry"));
    }
    return out;
}

// A rate literal: number (constant) or {"type": ...} object.
RateFunction rate_literal(const json& v, const std::string& what)
{
    if (v.is_number())
    {
        return RateFunction::constant(v.get<double>());
    }
    if (!v.is_object() || !v.contains("type") || !v["type"].is_string())
    {
        fail(what + ": expected a number, a rate name, or an object with a 'type'");
    }
    const std::string type = v["type"].get<std::string>();
    if (type == "constant")
    {
        allow_keys(v, what, {"type", "value"});
        return RateFunction::constant(number(v.value("value", json()), what + ".value"));
    }
    if (type == "sinusoid")
    {
        allow_keys(v, what, {"type", "offset", "amplitude", "frequency", "phase"});
        const double phase = v.contains("phase") ? number(v["phase"], what + ".phase") : 0.0;
        return RateFunction::sinusoid(number(v.value("offset", json()), what + ".offset"),
                                      number(v.value("amplitude", json()), what + ".amplitude"),
                                      number(v.value("frequency", json()), what + ".frequency"), phase);
    }
    if (type == "table")
    {
        allow_keys(v, what, {"type", "times", "values"});
        return RateFunction::table(numbers(v.value("times", json()), what + ".times"),
                                   numbers(v.value("values", json()), what + ".values"));
    }
    fail(what + ": unknown rate type '" + type + "'");
}

class Resolver
{
public:
    explicit Resolver(const std::map<std::string, RateFunction>& named) : named_(named) {}

    RateFunction operator()(const json& v, const std::string& what) const
    {
        if (v.is_string())
        {
            const auto it = named_.find(v.get<std::string>());
            if (it == named_.end())
            {
                fail(what + ": unknown rate name '" + v.get<std::string>() + "'");
            }
            return it->second;
        }
        return rate_literal(v, what);
    }

    // An array of S rates, or one rate repeated S times.
    std::vector<RateFunction> list(const json& chain, const char* key, std::size_t S) const
    {
        if (!chain.contains(key))
        {
            fail(std::string("chain.") + key + " is required for this kind");
        }
        const json& v = chain[key];
        const std::string what = std::string("chain.") + key;
        std::vector<RateFunction> out;
        if (v.is_array())
        {
            if (v.size() != S)
            {
                fail(what + " must have S = " + std::to_string(S) + " entries, got " + std::to_string(v.size()));
            }
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                out.push_back((*this)(v[i], what + "[" + std::to_string(i) + "]"));
            }
        }
        else
        {
            out.assign(S, (*this)(v, what));
        }
        return out;
    }

private:
    const std::map<std::string, RateFunction>& named_;
};

ChainSpec parse_chain(const json& c, std::map<std::string, RateFunction>& rates,
                      const std::vector<RateOverride>& overrides)
{
    allow_keys(c, "chain", {"kind", "S", "rates", "lambda", "mu", "a", "b", "transitions"});
    if (!c.contains("kind") || !c["kind"].is_string())
    {
        fail("chain.kind must be a string");
    }
    const auto kind = chain_kind_from_string(c["kind"].get<std::string>());
    if (!kind)
    {
        fail("unknown chain.kind '" + c["kind"].get<std::string>() + "'");
    }
    if (!c.contains("S"))
    {
        fail("chain.S is required");
    }
    const std::size_t S = count(c["S"], "chain.S");

    if (c.contains("rates"))
    {
        if (!c["rates"].is_object())
        {
            fail("chain.rates must be an object of named rates");
        }
        for (const auto& [name, v] : c["rates"].items())
        {
            rates.emplace(name, rate_literal(v, "chain.rates." + name));
        }
    }
    for (const auto& o : overrides)
    {
        const auto it = rates.find(o.name);
        if (it == rates.end())
        {
            fail("override names unknown rate '" + o.name + "'");
        }
        it->second = RateFunction::constant(o.value);
    }

    const Resolver resolve(rates);
    auto reject = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
        {
            if (c.contains(k))
            {
                fail(std::string("chain.") + k + " is not used by kind " + std::string(to_string(*kind)));
            }
        }
    };
    switch (*kind)
    {
    case ChainKind::birth_death:
        reject({"a", "b", "transitions"});
        return ChainSpec::birth_death(S, resolve.list(c, "lambda", S), resolve.list(c, "mu", S));
    case ChainKind::batch_birth:
        reject({"lambda", "b", "transitions"});
        return ChainSpec::batch_birth(S, resolve.list(c, "a", S), resolve.list(c, "mu", S));
    case ChainKind::batch_death:
        reject({"a", "mu", "transitions"});
        return ChainSpec::batch_death(S, resolve.list(c, "b", S), resolve.list(c, "lambda", S));
    case ChainKind::batch_both:
        reject({"lambda", "mu", "transitions"});
        return ChainSpec::batch_both(S, resolve.list(c, "a", S), resolve.list(c, "b", S));
    case ChainKind::general:
    {
        reject({"lambda", "mu", "a", "b"});
        if (!c.contains("transitions") || !c["transitions"].is_array())
        {
            fail("chain.transitions must be an array");
        }
        std::vector<Transition> ts;
        std::size_t i = 0;
        for (const auto& t : c["transitions"])
        {
            const std::string what = "chain.transitions[" + std::to_string(i++) + "]";
            allow_keys(t, what, {"from", "to", "rate"});
            if (!t.contains("from") || !t.contains("to") || !t.contains("rate"))
            {
                fail(what + " needs from, to and rate");
            }
            ts.push_back(Transition{count(t["from"], what + ".from"), count(t["to"], what + ".to"),
                                    resolve(t["rate"], what + ".rate")});
        }
        return ChainSpec::general(S, std::move(ts));
    }
    }
    fail("unreachable chain kind");
}

AnalysisConfig parse_analysis(const json& a)
{
    allow_keys(a, "analysis", {"horizon", "grid", "steps", "weights", "trials", "pairs", "seed", "tol"});
    AnalysisConfig cfg;
    if (a.contains("horizon")) cfg.horizon = number(a["horizon"], "analysis.horizon");
    if (a.contains("grid")) cfg.grid = count(a["grid"], "analysis.grid");
    if (a.contains("steps")) cfg.steps = count(a["steps"], "analysis.steps");
    if (a.contains("trials")) cfg.trials = count(a["trials"], "analysis.trials");
    cfg.pairs = cfg.trials;
    if (a.contains("pairs")) cfg.pairs = count(a["pairs"], "analysis.pairs");
    if (a.contains("seed")) cfg.seed = count(a["seed"], "analysis.seed");
    if (a.contains("tol")) cfg.tol = number(a["tol"], "analysis.tol");
    if (a.contains("weights"))
    {
        const json& w = a["weights"];
        if (w.is_array())
        {
            cfg.weights = WeightsMode::list;
            cfg.weight_values = numbers(w, "analysis.weights");
        }
        else if (w == "ones")
        {
            cfg.weights = WeightsMode::ones;
        }
        else if (w == "perron")
        {
            cfg.weights = WeightsMode::perron;
        }
        else if (w == "frozen-perron")
        {
            cfg.weights = WeightsMode::frozen_perron;
        }
        else
        {
            fail("analysis.weights must be ones, perron, frozen-perron or an array");
        }
    }
    if (!(cfg.horizon > 0.0))
    {
        fail("analysis.horizon must be positive");
    }
    if (cfg.grid < 2 || cfg.steps < 1 || cfg.trials < 1 || cfg.pairs < 1)
    {
        fail("analysis.grid must be >= 2 and steps, trials, pairs >= 1");
    }
    if (!(cfg.tol >= 0.0))
    {
        fail("analysis.tol must be non-negative");
    }
    return cfg;
}

json rate_json(const RateFunction& r)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RateFunction::Constant>)
            {
                return v.value;
            }
            else if constexpr (std::is_same_v<T, RateFunction::Sinusoid>)
            {
                return json{{"type", "sinusoid"},
                            {"offset", v.offset},
                            {"amplitude", v.amplitude},
                            {"frequency", v.frequency},
                            {"phase", v.phase}};
            }
            else
            {
                return json{{"type", "table"}, {"times", v.times}, {"values", v.values}};
            }
        },
        r.variant());
}

json rates_json(const std::vector<RateFunction>& rs)
{
    json out = json::array();
    for (const auto& r : rs)
    {
        out.push_back(rate_json(r));
    }
    return out;
}

}  // namespace

std::string_view to_string(WeightsMode mode)
{
    switch (mode)
    {
    case WeightsMode::ones: return "ones";
    case WeightsMode::perron: return "perron";
    case WeightsMode::frozen_perron: return "frozen-perron";
    case WeightsMode::list: return "list";
    }
    return "unknown";
}

RateOverride parse_override(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
    {
        fail("override must look like NAME=VALUE, got '" + std::string(text) + "'");
    }
    RateOverride o;
    o.name = std::string(text.substr(0, eq));
    const std::string_view num = text.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), o.value);
    if (ec != std::errc() || ptr != num.data() + num.size())
    {
        fail("override value is not a number: '" + std::string(num) + "'");
    }
    return o;
}

ModelFile parse_model(std::string_view text, const std::vector<RateOverride>& overrides)
{
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        fail(e.what());
    }
    allow_keys(doc, "document", {"schema_version", "chain", "analysis"});
    if (!doc.contains("schema_version"))
    {
        fail("schema_version is required");
    }
    const auto version = count(doc["schema_version"], "schema_version");
    if (version != static_cast<std::uint64_t>(kModelSchemaVersion))
    {
        fail("unsupported schema_version " + std::to_string(version));
    }
    if (!doc.contains("chain"))
    {
        fail("chain block is required");
    }
    std::map<std::string, RateFunction> rates;
    ChainSpec chain = parse_chain(doc["chain"], rates, overrides);
    AnalysisConfig analysis = doc.contains("analysis") ? parse_analysis(doc["analysis"]) : AnalysisConfig{};
    if (analysis.weights == WeightsMode::list && analysis.weight_values.size() != chain.states())
    {
        fail("analysis.weights must have S entries");
    }
    return ModelFile{kModelSchemaVersion, std::move(chain), std::move(rates), std::move(analysis)};
}

ModelFile load_model(const std::filesystem::path& path, const std::vector<RateOverride>& overrides)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        fail("cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), overrides);
}

std::string serialize_model(const ModelFile& model)
{
    const ChainSpec& c = model.chain;
    json chain{{"kind", std::string(to_string(c.kind()))}, {"S", c.states()}};
    switch (c.kind())
    {
    case ChainKind::birth_death:
        chain["lambda"] = rates_json(c.lambda());
        chain["mu"] = rates_json(c.mu());
        break;
    case ChainKind::batch_birth:
        chain["a"] = rates_json(c.a());
        chain["mu"] = rates_json(c.mu());
        break;
    case ChainKind::batch_death:
        chain["b"] = rates_json(c.b());
        chain["lambda"] = rates_json(c.lambda());
        break;
    case ChainKind::batch_both:
        chain["a"] = rates_json(c.a());
        chain["b"] = rates_json(c.b());
        break;
    case ChainKind::general:
    {
        json ts = json::array();
        for (const auto& t : c.transitions())
        {
            ts.push_back(json{{"from", t.from}, {"to", t.to}, {"rate", rate_json(t.rate)}});
        }
        chain["transitions"] = std::move(ts);
        break;
    }
    }

    const AnalysisConfig& a = model.analysis;
    json analysis{{"horizon", a.horizon}, {"grid", a.grid}, {"steps", a.steps}};
    if (a.weights == WeightsMode::list)
    {
        analysis["weights"] = a.weight_values;
    }
    else
    {
        analysis["weights"] = std::string(to_string(a.weights));
    }
    analysis["trials"] = a.trials;
    analysis["pairs"] = a.pairs;
    analysis["seed"] = a.seed;
    analysis["tol"] = a.tol;

    const json doc{{"schema_version", model.schema_version}, {"chain", chain}, {"analysis", analysis}};
    return doc.dump(2) + "\n";
}

std::vector<double> load_weights(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        fail("cannot read weights file '" + path.string() + "'");
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        fail(std::string("weights file: ") + e.what());
    }
    return numbers(doc, "weights file");
}

}  // namespace ergobound
