from enum import StrEnum


class PromptName(StrEnum):
    RERANK = 'rerank'
    RERANK_CANDIDATE = 'rerank_candidate'
    SCHEMA_SELECT = 'schema_select'
    PLAN = 'plan'
    EXECUTE = 'execute'
    TASK_EXPAND = 'task_expand'
    DIFFICULTY = 'difficulty'


class PromptText(StrEnum):
    RERANK = (
        "Your objective is to choose the most relevant dataset for a given a task (and few examples of the task). "
        "For each dataset, you will be provided with the dataset description, and tags related to the dataset. "
        "Please return the most relevant dataset, e.g., squad\n"
        "\n"
        "The following is the task\n"
        "{{instruction}}\n"
        "and these are some examples of the same:\n"
        "{{examples}}\n"
        "There are {{num}} datasets available for this task.\n"
        "{{datasets}}\n"
        "The name of the most relevant dataset for this task is:"
    )
    RERANK_CANDIDATE = (
        "{{counter}}{{dataset_name}}:Description-{{dataset_description}}.\n"
        "This dataset has the following tags:\n"
        "{{tags}}"
    )
    SCHEMA_SELECT = (
        "Your objective is to carefully analyze the task and the dataset mentioned, and decide whether the columns "
        "are relevant input, relevant output, irrelevant for the given task, or if it is ambiguous. There should be "
        "at most one output column. It is possible to have no relevant columns, in which case return the input and "
        "output column as empty lists.  Answer in a json format, with the following keys: input, output, "
        "irrelevant, ambiguous.\n"
        "{{INCONTEXT_EXAMPLES}}\n"
        "After seeing these examples with the required columns, please provide the relevant columns for this context:\n"
        "\n"
        "\n"
        "You are tasked with the following process. {{instruction}} For this task, you will use the "
        "{{dataset_name}} dataset from HuggingFace. Dataset Description: {{dataset_description}}\n"
        "A sample data instance from this is as follows. {{sample_row}}.\n"
        "This dataset has the following columns: {{dataset_columns}}\n"
        "Required Columns :"
    )
    PLAN = (
        "You are a Planning Agent. You create a plan to transform data samples from their existing format into "
        "the required format for a given task.\n"
        "\n"
        "-------------------------------------------------\n"
        "Here are some examples for your reference.\n"
        "\n"
        "{{in_context_examples}}\n"
        "\n"
        "------------------------------------------------\n"
        "Now do the following task:\n"
        "\n"
        "Task Description: {{task_description}}\n"
        "\n"
        "Task Examples:\n"
        "{{example}}\n"
        "\n"
        "Here are samples from a potentially relevant dataset for the task above. Notice how the format below is "
        "not as required by the task above.\n"
        "\n"
        "Dataset Samples:\n"
        "{{dataset_row}}\n"
        "\n"
        "Carefully analyze the  `Task Description` and the `Task Examples`. Propose a higher-level plan to convert "
        "data from the Dataset Sample to data in the required format task examples. Your plan should be a list of "
        "sequential steps that can be taken to perform the data transformation. You don't need to use all columns, "
        "as the dataset may not be fully relevant. Keep steps as simple, explicit and concise as possible. Each "
        "step in the plan may take any of the following actions:\n"
        "1. Generate new columns as required by the task, and save them\n"
        "2. Expand on a particular column to make it something more relevant to the task and save it\n"
        "3. Combine multiple columns from the dataset\n"
        "4. Choose columns that will form \"input\"\n"
        "5. After the input field is created, carefully analyze it to choose/generate the output field\n"
        "6. Ignore a data sample because it is not all relevant and return null for them.\n"
        "\n"
        "Return only the plan."
    )
    EXECUTE = (
        "You are a Data Transforming Agent. Your job is to transform data from a given format to the required "
        "format. Following are the detailed instructions for the same:\n"
        "1. Read the `Task Description`.\n"
        "2. An example of the input and output looks like for the task is shown in `Task Examples`\n"
        "3. The sample to be transformed is in `Data Sample`.\n"
        "4. Read the data transformation plan carefully that will help you convert the `Data Sample` into the "
        "required format. This should be relevant and intune to the `Task Description`\n"
        "5. Perform the plan step by step and explain your thinking.\n"
        "6. End your response with the transformed sample as a JSON response with exactly 2 fields: \"input\" "
        "and \"output\".\n"
        "-------------------------------------------------\n"
        "Here are some examples for your reference.\n"
        "{{incontext_examples}}\n"
        "------------------------------------------------\n"
        "Now do the following task:\n"
        "\n"
        "Task Description: {{task_description}}\n"
        "\n"
        "Task Examples:\n"
        "{{sample}}\n"
        "\n"
        "{{plan}}\n"
        "\n"
        "Dataset Sample:\n"
        "{{dataset_row}}\n"
        "\n"
        "\n"
        "Think step by step through the plan to convert the above `Dataset Sample` and show your working. End "
        "your response as a JSON with exactly two fields: \"input\", and \"output\"\n"
        "Response:"
    )
    TASK_EXPAND = (
        "Carefully analyse the  task description and examples of the task, and explain the task to give a "
        "clearer description. Do not explain each example, but rather capture the general trends. Also place "
        "special focus on the format of the input/output examples.\n"
        "-------------------------------------------------\n"
        "\n"
        "Task Description: {{task_description}}\n"
        "\n"
        "Task Examples: {{examples}}"
    )
    DIFFICULTY = (
        "We are building a dataset for automatically describing code\n"
        "(in words). Evaluate and rate the difficulty and complexity\n"
        "of describing the following code lines. You should give an\n"
        "overall score on a scale of 1 to 5,\n"
        "where a higher score indicates higher difficulty.\n"
        "You must just give a score without any other reasons.\n"
        "Here's the grading scale:\n"
        "1: Very easy. Anyone who understands the\n"
        "programming language could describe this almost instantly\n"
        "2: Easy. Anyone who understands the programming\n"
        "language could describe this with a bit of thought\n"
        "3. Neutral. Most non-expert people who understand\n"
        "the programming language would be able to describe this,\n"
        "but it might take time for them to understand the code\n"
        "4. Hard. It would require at least a minute\n"
        "for a non-expert person who understand the\n"
        "programming lanugage to understand and describe this code.\n"
        "5. Very hard. Most non-experts would make a mistake\n"
        "when trying to describe this code in a fixed timeframe.\n"
        "Professional programmers would have an easier time.\n"
        "\n"
        "Your answer shoud be a single number, 1 through 5,\n"
        "with nothing else in your response.\n"
        "\n"
        "{{incontext_examples}}\n"
        "\n"
        "{{input_code}}"
    )


class PromptPlaceholders:
    """Declared placeholders per template, in the order bindings are checked"""
    BY_NAME = {
        PromptName.RERANK: ("instruction", "examples", "num", "datasets"),
        PromptName.RERANK_CANDIDATE: ("counter", "dataset_name", "dataset_description", "tags"),
        PromptName.SCHEMA_SELECT: ("INCONTEXT_EXAMPLES", "instruction", "dataset_name", "dataset_description",
                                   "sample_row", "dataset_columns"),
        PromptName.PLAN: ("in_context_examples", "task_description", "example", "dataset_row"),
        PromptName.EXECUTE: ("incontext_examples", "task_description", "sample", "plan", "dataset_row"),
        PromptName.TASK_EXPAND: ("task_description", "examples"),
        PromptName.DIFFICULTY: ("incontext_examples", "input_code"),
    }


class IncontextFixtures(StrEnum):
    SCHEMA_SELECT = 'schema_select_incontext.txt'
    PLAN = 'plan_incontext.txt'
    EXECUTE = 'execute_incontext.txt'
    DIFFICULTY = 'difficulty_incontext.txt'
